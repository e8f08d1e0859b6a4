#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpplab {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Offline verification suite: solver against the exhaustive oracle,
// cut/flow duality and stream feasibility on fuzzed cylinders, the covering
// inequality with its separation search, glue-set cardinality constants,
// the pinned-boundary and disjoint-path mechanisms, rate-function and tail
// bound arithmetic, and worker-count determinism. `inject` deliberately
// corrupts one fixture ("capacity_violation" or "conservation_violation")
// so harness failures stay observable.
std::vector<CheckResult> run_verification(uint64_t seed, int workers,
                                          const std::string& inject);

}  // namespace fpplab
