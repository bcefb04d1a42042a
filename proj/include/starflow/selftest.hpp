#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starflow/evolution.hpp"

namespace starflow {

// One entry of the verification battery: a named check with a measured detail.
struct BatteryItem {
  std::string name;
  bool passed;
  std::string detail;
};

struct SelftestReport {
  uint64_t seed;
  std::vector<BatteryItem> items;
  std::vector<DiscrepancyFlag> flags;  // archived-table flags, deduplicated

  bool all_passed() const;
  // Plain-text report. Deterministic for a fixed seed: two runs in the same
  // process must produce byte-identical text.
  std::string to_text() const;
};

// Runs the whole verification battery: star-algebra laws, canonical
// commutators, equivalence intertwining, flow-matrix identities, Heisenberg
// residuals, energy conservation, the evolved-energy Laplacian constant,
// partition function, star-exponential ODE, KMS moments, reduced open
// evolution against generated goldens, positivity batteries, the classical
// flow suite, and the semigroup defect. Random batteries derive their streams
// from the seed.
SelftestReport run_selftest(uint64_t seed = 42);

}  // namespace starflow
