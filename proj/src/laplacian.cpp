#include "starflow/laplacian.hpp"

namespace starflow {

namespace {

// Constant coefficient matrix C with Delta = sum_{kl} C[k][l] d_k d_l in
// f_frame coordinates.
Mat4 laplacian_matrix(FrameId f_frame, const LaplacianSpec& spec,
                      const FrameCatalog* frames, Backend be) {
  Mat4 c;
  for (auto& row : c)
    for (auto& s : row) s = Scalar::zero(be);
  if (f_frame == spec.frame) {
    for (auto [z, zb] : spec.pairs) c[z][zb] = Scalar::one(be);
    return c;
  }
  if (!frames)
    throw std::invalid_argument(
        "cross-frame Laplacian needs a frame catalog for the chain rule");
  // d/dy_i = sum_k (F G^{-1})_{ki} d/dw_k
  Mat4 t = mat_mul(frames->frame_from_darboux(f_frame),
                   frames->darboux_from_frame(spec.frame));
  for (auto [z, zb] : spec.pairs)
    for (int k = 0; k < kDim; ++k)
      for (int l = 0; l < kDim; ++l) c[k][l] += t[k][z] * t[l][zb];
  return c;
}

Polynomial apply_matrix_operator(const Polynomial& p, const Mat4& c) {
  Polynomial r(p.frame(), p.backend());
  for (int k = 0; k < kDim; ++k) {
    Polynomial dk = p.derivative(k);
    if (dk.is_zero()) continue;
    for (int l = 0; l < kDim; ++l) {
      if (c[k][l].is_zero()) continue;
      r += dk.derivative(l).scaled(c[k][l]);
    }
  }
  return r;
}

}  // namespace

LaplacianSpec LaplacianSpec::total() {
  return {FrameId::complex_normal, {{0, 1}, {2, 3}}, "total"};
}
LaplacianSpec LaplacianSpec::system() {
  return {FrameId::complex_factor, {{0, 1}}, "system"};
}
LaplacianSpec LaplacianSpec::bath() {
  return {FrameId::complex_factor, {{2, 3}}, "bath"};
}
LaplacianSpec LaplacianSpec::system_and_bath() {
  return {FrameId::complex_factor, {{0, 1}, {2, 3}}, "system-and-bath"};
}

FormalSeries apply_laplacian(const FormalSeries& f, const LaplacianSpec& spec,
                             const FrameCatalog* frames) {
  Mat4 c = laplacian_matrix(f.frame(), spec, frames, f.backend());
  FormalSeries r(f.frame(), f.backend(), f.order());
  for (int k = 0; k <= f.order(); ++k) r.set(k, apply_matrix_operator(f.at(k), c));
  return r;
}

FormalSeries apply_exp_laplacian(const FormalSeries& f, const LaplacianSpec& spec,
                                 int sign, const FrameCatalog* frames) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("exp-Laplacian sign must be +1 or -1");
  Mat4 c = laplacian_matrix(f.frame(), spec, frames, f.backend());
  Backend be = f.backend();
  Scalar sgn_scalar = Scalar::integer(sign, be);
  FormalSeries result = f;
  FormalSeries term = f;
  for (int m = 1; m <= f.order(); ++m) {
    FormalSeries next(f.frame(), be, f.order());
    for (int k = 0; k <= f.order(); ++k)
      next.set(k, apply_matrix_operator(term.at(k), c));
    if (next.is_zero()) break;
    term = next.shifted_up(1).scaled(sgn_scalar / Scalar::integer(m, be));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

SquarePreservingReport square_preserving_witness(const FormalSeries& f,
                                                 const LaplacianSpec& spec,
                                                 const FrameCatalog* frames) {
  Backend be = f.backend();
  FormalSeries ft = f;
  if (f.frame() != spec.frame) {
    if (!frames)
      throw std::invalid_argument(
          "square_preserving_witness needs a catalog to transport f");
    ft = to_frame(f, spec.frame, *frames);
  }
  // The square expansion is only claimed for functions of the paired block.
  std::array<bool, kDim> allowed{false, false, false, false};
  for (auto [z, zb] : spec.pairs) allowed[z] = allowed[zb] = true;
  for (int k = 0; k <= ft.order(); ++k)
    for (const auto& [mono, coeff] : ft.at(k).terms())
      for (int i = 0; i < kDim; ++i)
        if (mono.exponent(i) > 0 && !allowed[i])
          throw std::invalid_argument(
              "witness argument depends on " + frame_vars(spec.frame)[i] +
              ", outside the " + spec.name + " block");

  FormalSeries lhs = apply_exp_laplacian(weyl_star(ft.conj(), ft), spec, +1);

  FormalSeries sf = apply_exp_laplacian(ft, spec, +1);
  FormalSeries rhs(spec.frame, be, ft.order());
  std::vector<int> term_counts;
  // Ordered tuples I over the antiholomorphic pair slots; derivative branches
  // shrink, so the loop exhausts quickly.
  std::vector<FormalSeries> branches = {sf};
  for (int r = 0; r <= ft.order(); ++r) {
    int nonzero = 0;
    Scalar w = Scalar::integer(2, be).pow(r) / factorial_scalar(r, be);
    FormalSeries level_sum(spec.frame, be, ft.order());
    for (const FormalSeries& d : branches) {
      if (d.is_zero()) continue;
      ++nonzero;
      level_sum += d.conj() * d;
    }
    term_counts.push_back(nonzero);
    if (nonzero == 0) break;
    rhs += level_sum.scaled(w).shifted_up(r);
    if (r == ft.order()) break;
    std::vector<FormalSeries> next;
    for (const FormalSeries& d : branches) {
      if (d.is_zero()) continue;
      for (auto [z, zb] : spec.pairs)
        next.push_back(differentiate(d, VarRef{spec.frame, zb}));
    }
    branches = std::move(next);
  }

  SquarePreservingReport report{lhs, rhs, lhs.max_deviation(rhs), lhs == rhs,
                                term_counts};
  return report;
}

}  // namespace starflow
