#pragma once

#include "starflow/star.hpp"

namespace starflow {

// Second-order operator Delta = sum over pairs d^2/(dz_k dzbar_k), anchored in
// a complex frame. Applied to functions over any frame by transporting the
// constant chain-rule coefficients, never the function.
struct LaplacianSpec {
  FrameId frame;
  std::vector<std::pair<int, int>> pairs;
  std::string name;

  static LaplacianSpec total();            // complex-normal, both pairs
  static LaplacianSpec system();           // complex-factor, (zS, zbS)
  static LaplacianSpec bath();             // complex-factor, (zB, zbB)
  static LaplacianSpec system_and_bath();  // complex-factor, both pairs
};

FormalSeries apply_laplacian(const FormalSeries& f, const LaplacianSpec& spec,
                             const FrameCatalog* frames = nullptr);

// exp(sign * hbar * Delta) f; finite per hbar-order, so exact within the
// truncation. sign must be +1 or -1, and the two compose to the identity.
FormalSeries apply_exp_laplacian(const FormalSeries& f, const LaplacianSpec& spec,
                                 int sign, const FrameCatalog* frames = nullptr);

// Both sides of the square-expansion identity for S = exp(hbar Delta):
//   S(conj(f) star_weyl f) = sum_r hbar^r (2^r/r!) sum_I conj(D_{r,I} f) D_{r,I} f
// with D_{r,I} = antiholomorphic derivatives after S. f must be supported on
// the spec's paired variables.
struct SquarePreservingReport {
  FormalSeries lhs;
  FormalSeries rhs;
  double max_deviation;
  bool exact_match;
  std::vector<int> term_counts;  // nonzero D-terms per derivative order
};

SquarePreservingReport square_preserving_witness(const FormalSeries& f,
                                                 const LaplacianSpec& spec,
                                                 const FrameCatalog* frames = nullptr);

}  // namespace starflow
