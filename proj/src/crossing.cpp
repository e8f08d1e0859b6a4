#include "fpplab/crossing.hpp"

#include <algorithm>
#include <queue>

#include "fpplab/errors.hpp"
#include "fpplab/maxflow.hpp"

namespace fpplab {

namespace {

Rat dot_rat_ll(const std::vector<Rat>& a, const std::vector<long long>& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
  return s;
}

}  // namespace

BoundaryWitness pinned_boundary_witness(const LatticeGraph& graph,
                                        const CylinderSpec& spec,
                                        const std::vector<Rat>& x0,
                                        const Rat& zeta) {
  spec.validate();
  const int d = spec.dim();
  if (static_cast<int>(x0.size()) != d)
    throw Error(Err::InvalidInput, "x0 dimension mismatch");
  if (zeta.sign() <= 0) throw Error(Err::InvalidInput, "zeta must be > 0");

  // every side of the cylinder must be at least zeta long
  for (size_t j = 0; j < spec.base.side_lengths.size(); ++j)
    if (Rat(spec.base.scale) * spec.base.side_lengths[j] < zeta)
      throw Error(Err::TooSmallCylinder, "basis side shorter than zeta");
  if (Rat(2) * spec.height < zeta)
    throw Error(Err::TooSmallCylinder, "cylinder height shorter than zeta");

  // x0 must lie on the boundary of the scaled basis
  std::vector<Rat> q(d);
  for (int i = 0; i < d; ++i) q[i] = x0[i] - spec.base.anchor[i];
  if (dot_rat_ll(q, spec.normal.v) != Rat(0))
    throw Error(Err::InvalidInput, "x0 not in the basis hyperplane");
  bool on_rim = false;
  for (size_t j = 0; j < spec.base.frame.size(); ++j) {
    Rat r = dot_rat_ll(q, spec.base.frame[j]);
    Rat f2(0);
    for (long long c : spec.base.frame[j]) f2 += Rat(c * c);
    Rat lim = Rat(spec.base.scale) * spec.base.side_lengths[j];
    if (r.sign() < 0 || r * r > lim * lim * f2)
      throw Error(Err::InvalidInput, "x0 outside the basis");
    if (r.is_zero() || r * r == lim * lim * f2) on_rim = true;
  }
  if (!on_rim) throw Error(Err::InvalidInput, "x0 not on the basis boundary");

  // vertices within euclidean distance zeta of x0 (exact)
  const Rat zeta2 = zeta * zeta;
  std::vector<uint8_t> in_ball(graph.num_vertices(), 0);
  for (int v = 0; v < graph.num_vertices(); ++v) {
    Rat dist2(0);
    for (int i = 0; i < d; ++i) {
      Rat diff = Rat(graph.coords[(size_t)v * d + i]) - x0[i];
      dist2 += diff * diff;
    }
    if (dist2 <= zeta2) in_ball[v] = 1;
  }

  // shortest path inside the ball from the lower half boundary to the upper
  std::vector<int> parent_vertex(graph.num_vertices(), -1);
  std::vector<int> parent_edge(graph.num_vertices(), -1);
  std::vector<uint8_t> seen(graph.num_vertices(), 0);
  std::queue<int> q2;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (in_ball[v] && (graph.tags[v] & kTagHalfLower)) {
      seen[v] = 1;
      q2.push(v);
    }
  int goal = -1;
  while (!q2.empty() && goal < 0) {
    int u = q2.front();
    q2.pop();
    if (graph.tags[u] & kTagHalfUpper) {
      goal = u;
      break;
    }
    for (int a = graph.adj_offset[u]; a < graph.adj_offset[u + 1]; ++a) {
      auto [w, e] = graph.adj[a];
      if (!in_ball[w] || seen[w]) continue;
      seen[w] = 1;
      parent_vertex[w] = u;
      parent_edge[w] = e;
      q2.push(w);
    }
  }
  if (goal < 0)
    throw Error(Err::TooSmallCylinder,
                "no crossing path inside the x0 neighbourhood");
  BoundaryWitness out;
  for (int v = goal; v >= 0; v = parent_vertex[v]) {
    out.path_vertices.push_back(v);
    if (parent_edge[v] >= 0) out.path_edges.push_back(parent_edge[v]);
  }
  std::reverse(out.path_vertices.begin(), out.path_vertices.end());
  std::reverse(out.path_edges.begin(), out.path_edges.end());
  return out;
}

CrossingPaths disjoint_crossing_paths(const LatticeGraph& graph,
                                      const CylinderSpec& spec,
                                      const Rat& margin) {
  spec.validate();
  if (margin.sign() <= 0) throw Error(Err::InvalidInput, "margin must be > 0");
  auto sources = graph.tagged(kTagHalfLower);
  auto sinks = graph.tagged(kTagHalfUpper);
  if (sources.empty() || sinks.empty())
    throw Error(Err::DegenerateCylinder, "half boundary set is empty");

  // unit capacities on edges within distance margin*n of the basis; for
  // points inside the cylinder that distance is |t|
  const Rat reach = margin * Rat(spec.base.scale);
  const Rat reach2w = reach * reach * Rat(spec.normal.norm2());
  const int d = spec.dim();
  std::vector<uint8_t> near(graph.num_vertices(), 0);
  for (int v = 0; v < graph.num_vertices(); ++v) {
    Rat sv(0);
    for (int i = 0; i < d; ++i)
      sv += (Rat(graph.coords[(size_t)v * d + i]) - spec.base.anchor[i]) *
            Rat(spec.normal.v[i]);
    if (sv * sv <= reach2w) near[v] = 1;
  }
  std::vector<long long> caps(graph.num_edges(), 0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    auto [u, v] = graph.edges[e];
    if (near[u] && near[v]) caps[e] = 1;
  }

  FlowResult flow = max_flow(graph, caps, sources, sinks);

  // split the unit stream into explicit paths
  std::vector<std::vector<std::pair<int, int>>> out(graph.num_vertices());
  std::vector<long long> balance(graph.num_vertices(), 0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (flow.stream.orient[e] == 0) continue;
    auto [lo, hi] = graph.edges[e];
    int from = flow.stream.orient[e] > 0 ? lo : hi;
    int to = flow.stream.orient[e] > 0 ? hi : lo;
    out[from].push_back({to, e});
    balance[from] -= 1;
    balance[to] += 1;
  }
  std::vector<size_t> cursor(graph.num_vertices(), 0);
  std::vector<uint8_t> is_sink(graph.num_vertices(), 0);
  for (int v : sinks) is_sink[v] = 1;
  std::vector<long long> absorb(graph.num_vertices(), 0);
  for (int v : sinks) absorb[v] = std::max(balance[v], 0LL);

  CrossingPaths result;
  std::vector<int> visited_at(graph.num_vertices(), -1);
  int walk_id = 0;
  for (int src : sources) {
    long long starts = std::max(-balance[src], 0LL);
    while (starts-- > 0) {
      std::vector<int> path_edges;
      std::vector<int> path_vertices{src};
      ++walk_id;
      visited_at[src] = walk_id;
      int cur = src;
      while (true) {
        if (is_sink[cur] && absorb[cur] > 0 && cur != src) {
          --absorb[cur];
          break;
        }
        if (cursor[cur] >= out[cur].size())
          throw Error(Err::Consistency, "stream decomposition got stuck");
        auto [nxt, e] = out[cur][cursor[cur]++];
        if (visited_at[nxt] == walk_id) {
          // erase the loop: arcs on it stay consumed, the walk resumes
          while (path_vertices.back() != nxt) {
            visited_at[path_vertices.back()] = -1;
            path_vertices.pop_back();
            path_edges.pop_back();
          }
        } else {
          path_vertices.push_back(nxt);
          path_edges.push_back(e);
          visited_at[nxt] = walk_id;
        }
        cur = path_vertices.back();
      }
      result.paths.push_back(std::move(path_edges));
    }
  }
  return result;
}

}  // namespace fpplab
