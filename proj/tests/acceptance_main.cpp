// Acceptance gate: runs the full verification battery twice and prints one
// PASS/FAIL line per criterion, the determinism double-run included. Exits
// nonzero when any line fails.

#include <cstdio>

#include "starflow/selftest.hpp"

int main() {
  starflow::SelftestReport first = starflow::run_selftest(42);
  starflow::SelftestReport second = starflow::run_selftest(42);

  int failures = 0;
  for (const starflow::BatteryItem& item : first.items) {
    if (!item.passed) ++failures;
    std::printf("%s %-26s %s\n", item.passed ? "PASS" : "FAIL",
                item.name.c_str(), item.detail.c_str());
  }

  bool deterministic = first.to_text() == second.to_text();
  if (!deterministic) ++failures;
  std::printf("%s %-26s two seed-42 runs %s byte-identical reports\n",
              deterministic ? "PASS" : "FAIL", "determinism",
              deterministic ? "produced" : "DID NOT produce");

  for (const starflow::DiscrepancyFlag& f : first.flags)
    std::printf("FLAG %-26s %s\n", f.id.c_str(), f.detail.c_str());

  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(first.items.size()) + 1 - failures,
              first.items.size() + 1);
  return failures == 0 ? 0 : 1;
}
