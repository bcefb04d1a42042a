#pragma once

#include "starflow/calculus.hpp"

namespace starflow {

// Hamiltonian flow of the coupled oscillator pair in Darboux coordinates
// (qS, pS, qB, pB), evaluated in closed form through the normal modes:
// x(t) = M(t) x(0). M(0) is the exact identity.
struct FlowMatrix {
  double t;
  std::array<std::array<double, kDim>, kDim> m;
};

FlowMatrix flow_matrix(double t, const Parameters& params);

// max |M^T J M - J|: the flow must be symplectic.
double symplectic_defect(const FlowMatrix& f);
// max |A B - C|: one-parameter group law with C = M(s + t).
double group_defect(const FlowMatrix& a, const FlowMatrix& b, const FlowMatrix& c);

// Pullback substitution x_i -> sum_j M(t)_ij x_j as a Darboux-frame linear
// map. t != 0 requires the float backend.
LinearMap flow_pullback(double t, const Parameters& params, Backend backend);

}  // namespace starflow
