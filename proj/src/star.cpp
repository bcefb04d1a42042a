#include "starflow/star.hpp"

namespace starflow {

namespace {

// One directed bidifferential channel: weight * (d_left on f) (d_right on g).
struct Direction {
  int left;
  int right;
  Scalar weight;
};

struct Branch {
  Polynomial left;
  Polynomial right;
};

// sum_r prefactor(r) hbar^r sum_{channels^r} w (d..d f)(d..d g), the shared
// engine behind Weyl and Wick. prefactor(r) multiplies the channel weights.
FormalSeries bidifferential_series(const FormalSeries& f, const FormalSeries& g,
                                   const std::vector<Direction>& dirs,
                                   const std::vector<Scalar>& prefactor) {
  int order = f.order();
  Backend be = f.backend();
  FormalSeries result(f.frame(), be, order);
  for (int i = 0; i <= order; ++i) {
    if (f.at(i).is_zero()) continue;
    for (int j = 0; i + j <= order; ++j) {
      if (g.at(j).is_zero()) continue;
      std::vector<Branch> level = {{f.at(i), g.at(j)}};
      std::vector<Scalar> weights = {Scalar::one(be)};
      for (int r = 0; i + j + r <= order; ++r) {
        Polynomial sum(f.frame(), be);
        for (size_t n = 0; n < level.size(); ++n)
          sum += (level[n].left * level[n].right).scaled(weights[n]);
        if (!sum.is_zero())
          result.set(i + j + r, result.at(i + j + r) + sum.scaled(prefactor[r]));
        if (i + j + r == order) break;
        std::vector<Branch> next;
        std::vector<Scalar> next_w;
        for (size_t n = 0; n < level.size(); ++n)
          for (const Direction& d : dirs) {
            Polynomial dl = level[n].left.derivative(d.left);
            if (dl.is_zero()) continue;
            Polynomial dr = level[n].right.derivative(d.right);
            if (dr.is_zero()) continue;
            next.push_back({std::move(dl), std::move(dr)});
            next_w.push_back(weights[n] * d.weight);
          }
        if (next.empty()) break;
        level = std::move(next);
        weights = std::move(next_w);
      }
    }
  }
  return result;
}

FormalSeries transported(const FormalSeries& f, FrameId target,
                         const FrameCatalog* frames, const char* what) {
  if (f.frame() == target) return f;
  if (!frames)
    throw std::invalid_argument(std::string(what) +
                                " needs a frame catalog to transport operands");
  return to_frame(f, target, *frames);
}

}  // namespace

StarProduct StarProduct::weyl() {
  return {Kind::weyl, FrameId::darboux, {}, "weyl"};
}
StarProduct StarProduct::wick_total() {
  return {Kind::wick, FrameId::complex_normal, {{0, 1}, {2, 3}}, "wick-total"};
}
StarProduct StarProduct::wick_system() {
  return {Kind::wick, FrameId::complex_factor, {{0, 1}}, "wick-system"};
}
StarProduct StarProduct::wick_bath() {
  return {Kind::wick, FrameId::complex_factor, {{2, 3}}, "wick-bath"};
}

std::optional<StarProduct> StarProduct::by_name(std::string_view name) {
  if (name == "weyl") return weyl();
  if (name == "wick-total") return wick_total();
  if (name == "wick-system") return wick_system();
  if (name == "wick-bath") return wick_bath();
  return std::nullopt;
}

FormalSeries weyl_star(const FormalSeries& f, const FormalSeries& g,
                       const FrameCatalog* frames) {
  FormalSeries gt = transported(g, f.frame(), frames, "weyl_star");
  Backend be = f.backend();
  Mat4 lam = frame_poisson(f.frame(), be);
  std::vector<Direction> dirs;
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      if (!lam[a][b].is_zero()) dirs.push_back({a, b, lam[a][b]});
  // prefactor (i/2)^r / r!, with one hbar per derivative order
  std::vector<Scalar> pre;
  Scalar i_half = Scalar::imaginary_unit(be) * Scalar::ratio(1, 2, be);
  for (int r = 0; r <= f.order(); ++r)
    pre.push_back(i_half.pow(r) / factorial_scalar(r, be));
  return bidifferential_series(f, gt, dirs, pre);
}

FormalSeries wick_star(const StarProduct& prod, const FormalSeries& f,
                       const FormalSeries& g, const FrameCatalog* frames) {
  if (prod.kind != StarProduct::Kind::wick)
    throw std::invalid_argument("wick_star needs a wick product id");
  FormalSeries ft = transported(f, prod.frame, frames, "wick_star");
  FormalSeries gt = transported(g, prod.frame, frames, "wick_star");
  Backend be = f.backend();
  std::vector<Direction> dirs;
  for (auto [z, zb] : prod.pairs) dirs.push_back({z, zb, Scalar::one(be)});
  // prefactor (2 hbar)^r / r!
  std::vector<Scalar> pre;
  for (int r = 0; r <= f.order(); ++r)
    pre.push_back(Scalar::integer(2, be).pow(r) / factorial_scalar(r, be));
  return bidifferential_series(ft, gt, dirs, pre);
}

FormalSeries star_product(const StarProduct& prod, const FormalSeries& f,
                          const FormalSeries& g, const FrameCatalog* frames) {
  return prod.kind == StarProduct::Kind::weyl ? weyl_star(f, g, frames)
                                              : wick_star(prod, f, g, frames);
}

FormalSeries star_commutator(const StarProduct& prod, const FormalSeries& f,
                             const FormalSeries& g, const FrameCatalog* frames) {
  return star_product(prod, f, g, frames) - star_product(prod, g, f, frames);
}

}  // namespace starflow
