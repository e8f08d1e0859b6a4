#pragma once

#include <cstdint>
#include <vector>

#include "fpplab/distributions.hpp"
#include "fpplab/lattice_graph.hpp"

namespace fpplab {

// Counter-based generator: every draw is a pure function of
// (seed, replication, edge index, slot), so results do not depend on the
// order in which replications or edges are evaluated.
uint64_t counter_hash(uint64_t seed, uint64_t a, uint64_t b, uint64_t c);

// Uniform in [0, 1) from a counter.
double counter_u01(uint64_t seed, uint64_t a, uint64_t b, uint64_t c);

struct CapacityAssignment {
  std::vector<double> values;  // per canonical edge index
  uint64_t seed = 0;
  uint64_t replication = 0;
};

// One capacity draw, exposed for callers that stream samples without a graph.
double sample_one(const DistributionSpec& dist, uint64_t seed,
                  uint64_t replication, uint64_t index);

CapacityAssignment sample_capacities(const LatticeGraph& graph,
                                     const DistributionSpec& dist,
                                     uint64_t seed, uint64_t replication);

// Integer-quantized capacities: round(value * scale). Exact solver input.
std::vector<long long> quantize(const CapacityAssignment& caps,
                                long long scale);

}  // namespace fpplab
