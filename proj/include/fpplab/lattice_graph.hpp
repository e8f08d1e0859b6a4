#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fpplab/geometry.hpp"

namespace fpplab {

// Vertex tags. A vertex can carry several: the top/bottom sets are subsets
// of the corresponding half-boundary sets on cylinders of height >= 1.
enum VertexTag : uint8_t {
  kTagHalfUpper = 1,   // has a neighbour outside, strictly above the base plane
  kTagHalfLower = 2,   // same, strictly below
  kTagTop = 4,         // an incident outside edge meets the upper face
  kTagBottom = 8,      // an incident outside edge meets the lower face
};

// Finite piece of the nearest-neighbour lattice inside a cylinder.
// Vertices are stored flat (dim coordinates each) in lexicographic order;
// edges are (u, v) index pairs with u < v, ordered by (u, axis). Immutable
// after construction.
struct LatticeGraph {
  int dim = 0;
  std::vector<long long> coords;            // size dim * num_vertices
  std::vector<std::pair<int, int>> edges;   // vertex index pairs
  std::vector<uint8_t> tags;                // per vertex
  std::vector<int> adj_offset;              // CSR over vertices
  std::vector<std::pair<int, int>> adj;     // (neighbour vertex, edge id)

  int num_vertices() const { return static_cast<int>(tags.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  std::vector<long long> vertex(int i) const {
    return {coords.begin() + (size_t)i * dim,
            coords.begin() + (size_t)(i + 1) * dim};
  }
  std::span<const long long> vertex_span(int i) const {
    return {coords.data() + (size_t)i * dim, (size_t)dim};
  }

  // Index of an integer point, or -1. Binary search over the sorted store.
  int vertex_index(std::span<const long long> p) const;
  // Index of the edge joining two vertex ids, or -1.
  int edge_index(int u, int v) const;

  std::vector<int> tagged(uint8_t mask) const;

  void build_adjacency();
};

// Builds the lattice graph of the cylinder: integer points of the region,
// nearest-neighbour edges whose segments stay inside, and all four boundary
// tags. Throws empty-graph if the region contains no lattice point.
LatticeGraph build_cylinder(const CylinderSpec& spec);

// The two half-boundary vertex sets (upper first). Vertices exactly on the
// base hyperplane belong to neither.
std::pair<std::vector<int>, std::vector<int>> boundary_half_sets(
    const LatticeGraph& graph, const CylinderSpec& spec);

// Top and bottom vertex sets: vertices with an outside neighbour whose
// joining segment meets the translated face nA + h*v (resp. nA - h*v).
std::pair<std::vector<int>, std::vector<int>> top_bottom_sets(
    const LatticeGraph& graph, const CylinderSpec& spec);

// Lattice neighbours of a vertex that are not in the cylinder.
std::vector<std::vector<long long>> outside_neighbours(
    const LatticeGraph& graph, const CylinderSpec& spec, int vertex);

// Same vertex set, edges restricted to the given ids (sorted, deduplicated).
LatticeGraph subgraph_with_edges(const LatticeGraph& graph,
                                 std::vector<int> keep_edges);

}  // namespace fpplab
