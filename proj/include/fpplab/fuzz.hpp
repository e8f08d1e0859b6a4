#pragma once

#include <cstdint>
#include <vector>

#include "fpplab/distributions.hpp"
#include "fpplab/geometry.hpp"
#include "fpplab/lattice_graph.hpp"

namespace fpplab {

// Deterministic instance generators for the verification suites. Everything
// is a pure function of (seed, index).

// Cylinder from a catalog of straight and tilted orientations in d = 2, 3,
// with a random scale up to max_n and height at least 1. Always yields a
// graph with nonempty half-boundary sets.
CylinderSpec random_cylinder_spec(uint64_t seed, uint64_t index,
                                  long long max_n);

// Distribution drawn from the five supported kinds.
DistributionSpec random_distribution(uint64_t seed, uint64_t index);

struct SmallInstance {
  LatticeGraph graph;              // at most 16 edges
  std::vector<long long> caps;     // integer capacities in [0, 7]
  std::vector<int> sources, sinks; // disjoint, nonempty
};

// Random subgraph of a small grid patch with random disjoint terminals.
SmallInstance random_small_instance(uint64_t seed, uint64_t index);

}  // namespace fpplab
