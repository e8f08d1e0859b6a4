#include "fpplab/lattice_graph.hpp"

#include <algorithm>
#include <cmath>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

// Compares point p against the vertex at index i.
int cmp_point(const LatticeGraph& g, int i, std::span<const long long> p) {
  for (int k = 0; k < g.dim; ++k) {
    long long c = g.coords[(size_t)i * g.dim + k];
    if (c != p[k]) return c < p[k] ? -1 : 1;
  }
  return 0;
}

// Loose bounding box of the cylinder in lattice coordinates.
void bounding_box(const CylinderSpec& spec, std::vector<long long>& lo,
                  std::vector<long long>& hi) {
  const int d = spec.dim();
  lo.assign(d, 0);
  hi.assign(d, 0);
  std::vector<double> vhat(d), base(d);
  double w = std::sqrt(static_cast<double>(spec.normal.norm2()));
  for (int i = 0; i < d; ++i) vhat[i] = spec.normal.v[i] / w;
  const double h = spec.height.dbl();
  std::vector<std::vector<double>> fhat;
  for (const auto& f : spec.base.frame) {
    double fn = 0;
    for (long long c : f) fn += static_cast<double>(c) * c;
    fn = std::sqrt(fn);
    std::vector<double> u(d);
    for (int i = 0; i < d; ++i) u[i] = f[i] / fn;
    fhat.push_back(u);
  }
  for (int i = 0; i < d; ++i) {
    double c = spec.base.anchor[i].dbl();
    double span_lo = 0, span_hi = 0;
    for (size_t j = 0; j < fhat.size(); ++j) {
      double ext = (Rat(spec.base.scale) * spec.base.side_lengths[j]).dbl() *
                   fhat[j][i];
      span_lo += std::min(0.0, ext);
      span_hi += std::max(0.0, ext);
    }
    span_lo -= std::fabs(vhat[i]) * h;
    span_hi += std::fabs(vhat[i]) * h;
    lo[i] = static_cast<long long>(std::floor(c + span_lo)) - 1;
    hi[i] = static_cast<long long>(std::ceil(c + span_hi)) + 1;
  }
}

}  // namespace

int LatticeGraph::vertex_index(std::span<const long long> p) const {
  int lo = 0, hi = num_vertices() - 1;
  while (lo <= hi) {
    int mid = lo + (hi - lo) / 2;
    int c = cmp_point(*this, mid, p);
    if (c == 0) return mid;
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return -1;
}

int LatticeGraph::edge_index(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
  if (it != edges.end() && *it == std::make_pair(u, v))
    return static_cast<int>(it - edges.begin());
  return -1;
}

std::vector<int> LatticeGraph::tagged(uint8_t mask) const {
  std::vector<int> out;
  for (int i = 0; i < num_vertices(); ++i)
    if (tags[i] & mask) out.push_back(i);
  return out;
}

void LatticeGraph::build_adjacency() {
  const int n = num_vertices();
  adj_offset.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++adj_offset[u + 1];
    ++adj_offset[v + 1];
  }
  for (int i = 0; i < n; ++i) adj_offset[i + 1] += adj_offset[i];
  adj.assign(edges.size() * 2, {0, 0});
  std::vector<int> cursor(adj_offset.begin(), adj_offset.end() - 1);
  for (int e = 0; e < num_edges(); ++e) {
    auto [u, v] = edges[e];
    adj[cursor[u]++] = {v, e};
    adj[cursor[v]++] = {u, e};
  }
}

LatticeGraph build_cylinder(const CylinderSpec& spec) {
  spec.validate();
  LatticeGraph g;
  g.dim = spec.dim();
  const int d = g.dim;

  std::vector<long long> lo, hi;
  bounding_box(spec, lo, hi);

  // lexicographic sweep over the bounding box
  std::vector<long long> p(lo);
  while (true) {
    if (point_in_cylinder(spec, p))
      g.coords.insert(g.coords.end(), p.begin(), p.end());
    int k = d - 1;
    while (k >= 0 && p[k] == hi[k]) {
      p[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++p[k];
  }
  const int n = static_cast<int>(g.coords.size() / d);
  if (n == 0) throw Error(Err::EmptyGraph, "cylinder contains no lattice point");
  g.tags.assign(n, 0);

  // edges: +unit step per axis, both endpoints inside (the region is convex)
  for (int i = 0; i < n; ++i) {
    std::vector<long long> q = g.vertex(i);
    for (int k = 0; k < d; ++k) {
      ++q[k];
      int j = g.vertex_index(q);
      if (j >= 0) g.edges.emplace_back(i, j);
      --q[k];
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.build_adjacency();

  // boundary tags
  for (int i = 0; i < n; ++i) {
    std::vector<long long> q = g.vertex(i);
    bool outside_seen = false;
    uint8_t t = 0;
    for (int k = 0; k < d && t != (kTagTop | kTagBottom); ++k) {
      for (int sgn : {1, -1}) {
        q[k] += sgn;
        if (!point_in_cylinder(spec, q)) {
          outside_seen = true;
          if (!(t & kTagTop) && segment_meets_face(spec, g.vertex(i), q, +1))
            t |= kTagTop;
          if (!(t & kTagBottom) && segment_meets_face(spec, g.vertex(i), q, -1))
            t |= kTagBottom;
        }
        q[k] -= sgn;
      }
    }
    if (outside_seen) {
      int side = hyperplane_side(spec, g.vertex(i));
      if (side > 0) t |= kTagHalfUpper;
      if (side < 0) t |= kTagHalfLower;
    }
    g.tags[i] = t;
  }
  return g;
}

std::pair<std::vector<int>, std::vector<int>> boundary_half_sets(
    const LatticeGraph& graph, const CylinderSpec&) {
  return {graph.tagged(kTagHalfUpper), graph.tagged(kTagHalfLower)};
}

std::pair<std::vector<int>, std::vector<int>> top_bottom_sets(
    const LatticeGraph& graph, const CylinderSpec&) {
  return {graph.tagged(kTagTop), graph.tagged(kTagBottom)};
}

std::vector<std::vector<long long>> outside_neighbours(
    const LatticeGraph& graph, const CylinderSpec& spec, int vertex) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> q = graph.vertex(vertex);
  for (int k = 0; k < graph.dim; ++k) {
    for (int sgn : {1, -1}) {
      q[k] += sgn;
      if (!point_in_cylinder(spec, q)) out.push_back(q);
      q[k] -= sgn;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LatticeGraph subgraph_with_edges(const LatticeGraph& graph,
                                 std::vector<int> keep_edges) {
  std::sort(keep_edges.begin(), keep_edges.end());
  keep_edges.erase(std::unique(keep_edges.begin(), keep_edges.end()),
                   keep_edges.end());
  LatticeGraph g;
  g.dim = graph.dim;
  g.coords = graph.coords;
  g.tags = graph.tags;
  for (int e : keep_edges) g.edges.push_back(graph.edges[e]);
  g.build_adjacency();
  return g;
}

}  // namespace fpplab
