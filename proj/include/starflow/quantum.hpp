#pragma once

#include "starflow/flow.hpp"
#include "starflow/laplacian.hpp"

namespace starflow {

// The coupled-oscillator Hamiltonians in the Darboux frame:
//   H_System = pS^2/2m + m nu^2 qS^2/2,   H_Bath likewise,
//   H_Interaction = (kappa/2)(qS - qB)^2, H_total = their sum.
struct HamiltonianSet {
  Parameters params;
  FormalSeries h_system;
  FormalSeries h_bath;
  FormalSeries h_interaction;
  FormalSeries h_total;
};

// Builds the set and verifies its defining identities on construction: the
// interaction expansion, and — whenever the catalog can transport there — the
// normal form (p1^2+p2^2)/2m + m nu^2 q1^2/2 + m nu_kappa^2 q2^2/2 and the
// complex normal form (nu/2) z1 zb1 + (nu_kappa/2) z2 zb2. Throws
// std::runtime_error naming the identity that failed.
HamiltonianSet hamiltonian_catalog(const FrameCatalog& frames, int order);

// Classical pullback along the oscillator flow, f -> f(M(t) x). t = 0 is the
// exact identity on any backend; t != 0 requires the float backend.
FormalSeries classical_pullback(const FormalSeries& f, double t,
                                const FrameCatalog& frames);

// Heisenberg evolution by conjugation with the equivalence transformation,
//   A_t = S^{-1} ∘ Φ_t* ∘ S,   S = exp(hbar Δ) over the total complex pairs.
// A one-parameter group of star-automorphisms of the Weyl product; the result
// is returned in f's frame.
FormalSeries heisenberg_evolve(const FormalSeries& f, double t,
                               const FrameCatalog& frames);

// Per-hbar-order magnitude of the Heisenberg-equation defect
//   (A_{t+dt} f - A_{t-dt} f)/(2 dt) - (i/hbar) [H_total, A_t f]_weyl.
// The commutator starts at order hbar, so dividing by hbar is a series
// reindex; it throws when the order-0 part survives (a broken star product).
// The top hbar-order of the quotient is not determined by the truncation, so
// the result covers orders 0 .. N-1.
std::vector<double> heisenberg_residual(const FormalSeries& f, double t,
                                        const HamiltonianSet& h,
                                        const FrameCatalog& frames,
                                        double dt = 1e-4);

}  // namespace starflow
