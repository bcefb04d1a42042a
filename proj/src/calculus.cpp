#include "starflow/calculus.hpp"

namespace starflow {

namespace {

// Substitutes v_i -> images[i] (polynomials over the target frame).
Polynomial substitute(const Polynomial& f, const std::array<Polynomial, kDim>& images,
                      FrameId target_frame) {
  Backend be = f.backend();
  Polynomial result(target_frame, be);
  for (const auto& [mono, coeff] : f.terms()) {
    Polynomial term = Polynomial::constant(target_frame, coeff);
    for (int i = 0; i < kDim; ++i)
      for (int e = 0; e < mono.exponent(i); ++e) term = term * images[i];
    result += term;
  }
  return result;
}

std::array<Polynomial, kDim> images_from_matrix(const Mat4& a, const Vec4* offset,
                                                FrameId target, Backend be) {
  std::array<Polynomial, kDim> images{Polynomial(target, be), Polynomial(target, be),
                                      Polynomial(target, be), Polynomial(target, be)};
  for (int i = 0; i < kDim; ++i) {
    Polynomial img(target, be);
    for (int j = 0; j < kDim; ++j)
      if (!a[i][j].is_zero()) img.add_term(Monomial::variable(j), a[i][j]);
    if (offset && !(*offset)[i].is_zero()) img.add_term(Monomial(), (*offset)[i]);
    images[i] = img;
  }
  return images;
}

// Chain-rule coefficients: d/dy_i = sum_k v_k d/dw_k for f over frame F and a
// variable of frame G, with v = (F_from_darboux * darboux_from_G) column i.
Vec4 chain_coefficients(FrameId f_frame, VarRef var, const FrameCatalog& frames) {
  const Mat4& fm = frames.frame_from_darboux(f_frame);
  const Mat4& gi = frames.darboux_from_frame(var.frame);
  Backend be = frames.backend();
  Vec4 v;
  for (int k = 0; k < kDim; ++k) {
    Scalar s = Scalar::zero(be);
    for (int j = 0; j < kDim; ++j) s += fm[k][j] * gi[j][var.index];
    v[k] = s;
  }
  return v;
}

}  // namespace

Polynomial differentiate(const Polynomial& f, VarRef var, const FrameCatalog* frames) {
  if (var.index < 0 || var.index >= kDim)
    throw std::invalid_argument("variable index out of range");
  if (var.frame == f.frame()) return f.derivative(var.index);
  if (!frames)
    throw std::invalid_argument("cross-frame derivative needs a frame catalog");
  Vec4 v = chain_coefficients(f.frame(), var, *frames);
  Polynomial r(f.frame(), f.backend());
  for (int k = 0; k < kDim; ++k)
    if (!v[k].is_zero()) r += f.derivative(k).scaled(v[k]);
  return r;
}

FormalSeries differentiate(const FormalSeries& f, VarRef var,
                           const FrameCatalog* frames) {
  FormalSeries r(f.frame(), f.backend(), f.order());
  for (int k = 0; k <= f.order(); ++k) r.set(k, differentiate(f.at(k), var, frames));
  return r;
}

LinearMap LinearMap::identity(FrameId frame, Backend backend) {
  LinearMap m{frame, mat_identity(backend), {}};
  for (auto& s : m.offset) s = Scalar::zero(backend);
  return m;
}

Polynomial substitute_linear(const Polynomial& f, const LinearMap& map) {
  if (map.frame != f.frame())
    throw std::invalid_argument("substitution map frame differs from polynomial frame");
  return substitute(f, images_from_matrix(map.a, &map.offset, map.frame, f.backend()),
                    map.frame);
}

FormalSeries substitute_linear(const FormalSeries& f, const LinearMap& map) {
  FormalSeries r(f.frame(), f.backend(), f.order());
  for (int k = 0; k <= f.order(); ++k) r.set(k, substitute_linear(f.at(k), map));
  return r;
}

Polynomial to_frame(const Polynomial& f, FrameId target, const FrameCatalog& frames) {
  if (f.frame() == target) return f;
  // w = F x and x = G^{-1} y give w = (F G^{-1}) y.
  Mat4 t = mat_mul(frames.frame_from_darboux(f.frame()),
                   frames.darboux_from_frame(target));
  return substitute(f, images_from_matrix(t, nullptr, target, f.backend()), target);
}

FormalSeries to_frame(const FormalSeries& f, FrameId target, const FrameCatalog& frames) {
  if (f.frame() == target) return f;
  FormalSeries r(target, f.backend(), f.order());
  for (int k = 0; k <= f.order(); ++k) r.set(k, to_frame(f.at(k), target, frames));
  return r;
}

Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g,
                           const FrameCatalog* frames) {
  const Polynomial* gp = &g;
  Polynomial gt(f.frame(), f.backend());
  if (g.frame() != f.frame()) {
    if (!frames)
      throw std::invalid_argument("cross-frame Poisson bracket needs a frame catalog");
    gt = to_frame(g, f.frame(), *frames);
    gp = &gt;
  }
  Mat4 lam = frame_poisson(f.frame(), f.backend());
  Polynomial r(f.frame(), f.backend());
  for (int a = 0; a < kDim; ++a) {
    Polynomial da = f.derivative(a);
    if (da.is_zero()) continue;
    for (int b = 0; b < kDim; ++b) {
      if (lam[a][b].is_zero()) continue;
      Polynomial db = gp->derivative(b);
      if (db.is_zero()) continue;
      r += (da * db).scaled(lam[a][b]);
    }
  }
  return r;
}

FormalSeries poisson_bracket(const FormalSeries& f, const FormalSeries& g,
                             const FrameCatalog* frames) {
  FormalSeries r(f.frame(), f.backend(), f.order());
  for (int i = 0; i <= f.order(); ++i) {
    if (f.at(i).is_zero()) continue;
    for (int j = 0; i + j <= f.order(); ++j) {
      if (g.at(j).is_zero()) continue;
      Polynomial b = poisson_bracket(f.at(i), g.at(j), frames);
      if (!b.is_zero()) r.set(i + j, r.at(i + j) + b);
    }
  }
  return r;
}

Scalar gaussian_moment(const Polynomial& f, const Scalar& a, const Scalar& b) {
  if (f.frame() != FrameId::darboux)
    throw std::invalid_argument("gaussian_moment expects a Darboux-frame polynomial");
  Backend be = f.backend();
  if (!a.is_real() || !b.is_real() || !(a.real() > 0.0) || !(b.real() > 0.0))
    throw std::domain_error("gaussian_moment needs real positive widths a, b");
  Scalar acc = Scalar::zero(be);
  Scalar inv2a = Scalar::one(be) / (a + a);
  Scalar inv2b = Scalar::one(be) / (b + b);
  for (const auto& [mono, coeff] : f.terms()) {
    if (mono.exponent(0) != 0 || mono.exponent(1) != 0)
      throw std::invalid_argument("gaussian_moment saw system variables in " +
                                  mono.to_string(f.frame()));
    int jq = mono.exponent(2), kp = mono.exponent(3);
    if (jq % 2 == 1 || kp % 2 == 1) continue;
    Scalar w = double_factorial_odd(jq / 2, be) * inv2a.pow(jq / 2) *
               double_factorial_odd(kp / 2, be) * inv2b.pow(kp / 2);
    acc += coeff * w;
  }
  return acc;
}

}  // namespace starflow
