#include "starflow/quantum.hpp"

#include <stdexcept>

#include "starflow/star.hpp"

namespace starflow {

HamiltonianSet hamiltonian_catalog(const FrameCatalog& frames, int order) {
  const Parameters& params = frames.params();
  Backend b = frames.backend();
  const FrameId dar = FrameId::darboux;

  Polynomial qS = Polynomial::variable(dar, 0, b);
  Polynomial pS = Polynomial::variable(dar, 1, b);
  Polynomial qB = Polynomial::variable(dar, 2, b);
  Polynomial pB = Polynomial::variable(dar, 3, b);

  Scalar half = Scalar::ratio(1, 2, b);
  Scalar inv_m = Scalar::one(b) / params.m();
  Scalar m_nu2 = params.m() * params.nu() * params.nu();

  Polynomial hs = (pS * pS).scaled(half * inv_m) + (qS * qS).scaled(half * m_nu2);
  Polynomial hb = (pB * pB).scaled(half * inv_m) + (qB * qB).scaled(half * m_nu2);
  Polynomial diff = qS - qB;
  Polynomial hi = (diff * diff).scaled(half * params.kappa());
  Polynomial ht = hs + hb + hi;

  // interaction expansion identity
  Scalar half_kappa = half * params.kappa();
  Polynomial hi_expanded = (qS * qS).scaled(half_kappa) + (qB * qB).scaled(half_kappa) -
                           (qS * qB).scaled(params.kappa());
  if (!hi.approx_equal(hi_expanded))
    throw std::runtime_error(
        "hamiltonian invariant violated: interaction != (kappa/2)(qS - qB)^2 expanded");

  if (frames.transport_available(FrameId::normal)) {
    Scalar m_nuk2 = params.m() * params.nu_kappa() * params.nu_kappa();
    Polynomial q1 = Polynomial::variable(FrameId::normal, 0, b);
    Polynomial p1 = Polynomial::variable(FrameId::normal, 1, b);
    Polynomial q2 = Polynomial::variable(FrameId::normal, 2, b);
    Polynomial p2 = Polynomial::variable(FrameId::normal, 3, b);
    Polynomial normal_form = (p1 * p1 + p2 * p2).scaled(half * inv_m) +
                             (q1 * q1).scaled(half * m_nu2) +
                             (q2 * q2).scaled(half * m_nuk2);
    if (!to_frame(ht, FrameId::normal, frames).approx_equal(normal_form))
      throw std::runtime_error(
          "hamiltonian invariant violated: H_total normal form "
          "(p1^2+p2^2)/2m + m nu^2 q1^2/2 + m nu_kappa^2 q2^2/2");
  }

  if (frames.transport_available(FrameId::complex_normal)) {
    const FrameId cn = FrameId::complex_normal;
    Polynomial z1 = Polynomial::variable(cn, 0, b);
    Polynomial zb1 = Polynomial::variable(cn, 1, b);
    Polynomial z2 = Polynomial::variable(cn, 2, b);
    Polynomial zb2 = Polynomial::variable(cn, 3, b);
    Polynomial complex_form =
        (z1 * zb1).scaled(half * params.nu()) + (z2 * zb2).scaled(half * params.nu_kappa());
    if (!to_frame(ht, cn, frames).approx_equal(complex_form))
      throw std::runtime_error(
          "hamiltonian invariant violated: H_total complex normal form "
          "(nu/2) z1 zb1 + (nu_kappa/2) z2 zb2");
  }

  HamiltonianSet set{params, FormalSeries::of_polynomial(hs, order),
                     FormalSeries::of_polynomial(hb, order),
                     FormalSeries::of_polynomial(hi, order),
                     FormalSeries::of_polynomial(ht, order)};
  if (!set.h_total.approx_equal(set.h_system + set.h_bath + set.h_interaction))
    throw std::runtime_error(
        "hamiltonian invariant violated: H_total != H_System + H_Bath + H_Interaction");
  return set;
}

FormalSeries classical_pullback(const FormalSeries& f, double t,
                                const FrameCatalog& frames) {
  if (t == 0.0) return f;
  FormalSeries fd = to_frame(f, FrameId::darboux, frames);
  FormalSeries pulled =
      substitute_linear(fd, flow_pullback(t, frames.params(), f.backend()));
  return to_frame(pulled, f.frame(), frames);
}

FormalSeries heisenberg_evolve(const FormalSeries& f, double t,
                               const FrameCatalog& frames) {
  if (t == 0.0) return f;
  const LaplacianSpec total = LaplacianSpec::total();
  FormalSeries fd = to_frame(f, FrameId::darboux, frames);
  FormalSeries dressed = apply_exp_laplacian(fd, total, +1, &frames);
  FormalSeries pulled =
      substitute_linear(dressed, flow_pullback(t, frames.params(), f.backend()));
  FormalSeries undressed = apply_exp_laplacian(pulled, total, -1, &frames);
  return to_frame(undressed, f.frame(), frames);
}

std::vector<double> heisenberg_residual(const FormalSeries& f, double t,
                                        const HamiltonianSet& h,
                                        const FrameCatalog& frames, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("heisenberg residual: dt must be positive");
  FormalSeries fd = to_frame(f, FrameId::darboux, frames);
  FormalSeries plus = heisenberg_evolve(fd, t + dt, frames);
  FormalSeries minus = heisenberg_evolve(fd, t - dt, frames);
  FormalSeries lhs = (plus - minus).scaled(Scalar::real_double(1.0 / (2.0 * dt)));

  FormalSeries evolved = heisenberg_evolve(fd, t, frames);
  FormalSeries comm = star_commutator(StarProduct::weyl(), h.h_total, evolved, &frames);
  FormalSeries rhs = comm.scaled(Scalar::imaginary_unit(fd.backend())).shifted_down();

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(fd.order()));
  for (int k = 0; k + 1 <= fd.order(); ++k)
    out.push_back((lhs.at(k) - rhs.at(k)).max_abs_coeff());
  return out;
}

}  // namespace starflow
