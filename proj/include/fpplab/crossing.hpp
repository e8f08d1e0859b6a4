#pragma once

#include <vector>

#include "fpplab/lattice_graph.hpp"
#include "fpplab/rational.hpp"

namespace fpplab {

// Shortest lattice path between the two half boundaries staying within
// euclidean distance zeta of a point x0 on the boundary of the basis. Every
// set of edges separating the half boundaries must meet it, so its size
// bounds the number of edges a cut is forced to touch near x0.
struct BoundaryWitness {
  std::vector<int> path_edges;  // edge ids in the graph
  std::vector<int> path_vertices;
  int size() const { return static_cast<int>(path_edges.size()); }
};

BoundaryWitness pinned_boundary_witness(const LatticeGraph& graph,
                                        const CylinderSpec& spec,
                                        const std::vector<Rat>& x0,
                                        const Rat& zeta);

// Edge-disjoint lattice paths from the lower half boundary to the upper
// one, using only edges within distance margin*n of the basis. Found by a
// unit-capacity flow, then split into explicit paths.
struct CrossingPaths {
  std::vector<std::vector<int>> paths;  // edge ids per path
  long long count() const { return static_cast<long long>(paths.size()); }
};

CrossingPaths disjoint_crossing_paths(const LatticeGraph& graph,
                                      const CylinderSpec& spec,
                                      const Rat& margin);

}  // namespace fpplab
