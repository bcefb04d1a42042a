#pragma once

#include <string>
#include <vector>

#include "starflow/states.hpp"

namespace starflow {

// System-only observable produced by reducing a full-space observable with a
// bath functional, together with where it came from.
struct ReducedObservable {
  FormalSeries series;     // Darboux frame, no bath variables
  std::string observable;  // textual id of the source observable
  std::string state;       // description of the bath functional
  double t = 0.0;
};

// (id ⊗ state) applied monomial-wise; f is transported to the Darboux frame
// first when needed.
ReducedObservable partial_reduce(const FormalSeries& f, const BathState& state,
                                 std::string_view observable = "");

// Reduced Heisenberg evolution of a system observable: embed along the
// projection, conjugate the classical pullback by the equivalence, reduce.
// Throws std::invalid_argument when the observable touches bath variables.
ReducedObservable open_evolve(const FormalSeries& observable, double t,
                              const BathState& state,
                              std::string_view label = "");

// Max per-order coefficient deviation between evolving for s+t in one step
// and chaining two reduced evolutions. Nonzero in general: reduction forgets
// the bath correlations the second leg would need.
double semigroup_defect(const FormalSeries& observable, double s, double t,
                        const BathState& state);

// A disagreement between the archived coefficient table and the generated
// golden reference. Flags document the archived entry; they are not failures.
struct DiscrepancyFlag {
  std::string id;
  std::string detail;
};

enum class ReferenceObservable { q_system, p_system, h_system };
std::string reference_observable_name(ReferenceObservable obs);

struct ReferenceComparison {
  double max_deviation = 0.0;  // pipeline vs generated golden, over the grid
  std::vector<DiscrepancyFlag> flags;
};

// Compares the reduced evolution of a catalog observable against a golden
// expression generated from the flow matrix and the bath-moment oracles, over
// a time grid. Also checks the archived coefficient table against the golden
// and emits a flag for each entry that disagrees.
ReferenceComparison reference_compare(ReferenceObservable obs,
                                      const std::vector<double>& grid,
                                      const BathState& state);

}  // namespace starflow
