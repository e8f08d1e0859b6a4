#include "fpplab/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

template <class Cap>
struct ResidualEps;
template <>
struct ResidualEps<long long> {
  static constexpr long long value = 0;
};
template <>
struct ResidualEps<double> {
  static constexpr double value = 1e-12;
};

// Dinic over an explicit residual arc store. Undirected edges are a single
// arc pair with the capacity on both sides; terminal arcs are one-sided.
template <class Cap>
class Dinic {
 public:
  explicit Dinic(int n) : head_(n, -1), level_(n), iter_(n) {}

  int add_pair(int u, int v, Cap cap_uv, Cap cap_vu) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({v, head_[u], cap_uv});
    head_[u] = id;
    arcs_.push_back({u, head_[v], cap_vu});
    head_[v] = id + 1;
    return id;
  }

  Cap run(int s, int t) {
    static constexpr Cap eps = ResidualEps<Cap>::value;
    Cap total = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (true) {
        Cap pushed = dfs(s, t, std::numeric_limits<Cap>::max());
        if (pushed <= eps) break;
        total += pushed;
      }
    }
    return total;
  }

  Cap residual(int arc) const { return arcs_[arc].cap; }

  std::vector<uint8_t> reachable(int s) const {
    static constexpr Cap eps = ResidualEps<Cap>::value;
    std::vector<uint8_t> seen(head_.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int a = head_[u]; a != -1; a = arcs_[a].next) {
        if (arcs_[a].cap > eps && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          stack.push_back(arcs_[a].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    int next;
    Cap cap;
  };

  bool bfs(int s, int t) {
    static constexpr Cap eps = ResidualEps<Cap>::value;
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int a = head_[u]; a != -1; a = arcs_[a].next) {
        if (arcs_[a].cap > eps && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  Cap dfs(int u, int t, Cap limit) {
    static constexpr Cap eps = ResidualEps<Cap>::value;
    if (u == t) return limit;
    for (int& a = iter_[u]; a != -1; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (arc.cap > eps && level_[arc.to] == level_[u] + 1) {
        Cap got = dfs(arc.to, t, std::min(limit, arc.cap));
        if (got > eps) {
          arc.cap -= got;
          arcs_[a ^ 1].cap += got;
          return got;
        }
      }
    }
    level_[u] = -2;  // dead end for this phase
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

template <class Cap>
FlowResult solve(const LatticeGraph& graph, std::span<const Cap> caps,
                 std::span<const int> sources, std::span<const int> sinks) {
  if (static_cast<int>(caps.size()) != graph.num_edges())
    throw Error(Err::Consistency, "capacity array does not match graph");
  if (sources.empty() || sinks.empty())
    throw Error(Err::InvalidInput, "empty terminal set");
  std::vector<uint8_t> is_source(graph.num_vertices(), 0),
      is_sink(graph.num_vertices(), 0);
  for (int v : sources) is_source[v] = 1;
  for (int v : sinks) is_sink[v] = 1;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (is_source[v] && is_sink[v])
      throw Error(Err::InvalidInput, "source and sink sets overlap");

  const int n = graph.num_vertices();
  const int s = n, t = n + 1;
  Dinic<Cap> dinic(n + 2);

  Cap inf = 1;
  for (Cap c : caps) {
    if (c < 0) throw Error(Err::InvalidInput, "negative capacity");
    inf += c;
  }
  std::vector<int> edge_arc(graph.num_edges());
  for (int e = 0; e < graph.num_edges(); ++e) {
    auto [u, v] = graph.edges[e];
    edge_arc[e] = dinic.add_pair(u, v, caps[e], caps[e]);
  }
  std::vector<int> source_arc, sink_arc;
  for (int v : sources) source_arc.push_back(dinic.add_pair(s, v, inf, 0));
  for (int v : sinks) sink_arc.push_back(dinic.add_pair(v, t, inf, 0));

  FlowResult res;
  Cap flow = dinic.run(s, t);
  if constexpr (std::is_same_v<Cap, long long>) {
    res.value_int = flow;
    res.value = static_cast<double>(flow);
    res.exact = true;
  } else {
    res.value = flow;
  }

  // stream from the residual pairs: net flow = (rev - fwd)/2 relative to a
  // starting capacity of caps[e] on both sides
  res.stream.g.assign(graph.num_edges(), 0.0);
  res.stream.orient.assign(graph.num_edges(), 0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    Cap fwd = dinic.residual(edge_arc[e]);
    Cap rev = dinic.residual(edge_arc[e] ^ 1);
    double net = (static_cast<double>(rev) - static_cast<double>(fwd)) / 2.0;
    if (net > 0) {
      res.stream.g[e] = net;
      res.stream.orient[e] = 1;
    } else if (net < 0) {
      res.stream.g[e] = -net;
      res.stream.orient[e] = -1;
    }
  }

  // cut closest to the sources: saturated edges out of the residual-reachable set
  auto seen = dinic.reachable(s);
  res.source_side.assign(n, 0);
  for (int v = 0; v < n; ++v) res.source_side[v] = seen[v];
  for (int e = 0; e < graph.num_edges(); ++e) {
    auto [u, v] = graph.edges[e];
    if (seen[u] != seen[v]) res.cut_edges.push_back(e);
  }
  return res;
}

// Assigns each sink's absorbed flux to its first outside neighbour.
void attach_exits(FlowResult& res, const LatticeGraph& graph,
                  const CylinderSpec& spec, std::span<const int> sinks) {
  for (int v : sinks) {
    double absorbed = 0.0;
    for (int a = graph.adj_offset[v]; a < graph.adj_offset[v + 1]; ++a) {
      auto [w, e] = graph.adj[a];
      (void)w;
      if (res.stream.orient[e] == 0) continue;
      auto [lo, hi] = graph.edges[e];
      int into = res.stream.orient[e] > 0 ? hi : lo;
      absorbed += (into == v) ? res.stream.g[e] : -res.stream.g[e];
    }
    if (absorbed <= 0) continue;
    auto outs = outside_neighbours(graph, spec, v);
    if (outs.empty()) continue;
    res.stream.exits.push_back({v, outs.front(), absorbed});
  }
}

std::vector<int> require_tagged(const LatticeGraph& graph, uint8_t mask,
                                const char* what) {
  auto set = graph.tagged(mask);
  if (set.empty())
    throw Error(Err::DegenerateCylinder,
                std::string(what) + " vertex set is empty");
  return set;
}

}  // namespace

FlowResult max_flow(const LatticeGraph& graph, std::span<const double> caps,
                    std::span<const int> sources, std::span<const int> sinks) {
  return solve<double>(graph, caps, sources, sinks);
}

FlowResult max_flow(const LatticeGraph& graph, std::span<const long long> caps,
                    std::span<const int> sources, std::span<const int> sinks) {
  return solve<long long>(graph, caps, sources, sinks);
}

FlowResult tau_flow(const LatticeGraph& graph, const CylinderSpec& spec,
                    const CapacityAssignment& caps) {
  auto upper = require_tagged(graph, kTagHalfUpper, "upper half boundary");
  auto lower = require_tagged(graph, kTagHalfLower, "lower half boundary");
  FlowResult res = max_flow(graph, caps.values, upper, lower);
  attach_exits(res, graph, spec, lower);
  return res;
}

FlowResult phi_flow(const LatticeGraph& graph, const CylinderSpec& spec,
                    const CapacityAssignment& caps) {
  auto top = require_tagged(graph, kTagTop, "top");
  auto bottom = require_tagged(graph, kTagBottom, "bottom");
  FlowResult res = max_flow(graph, caps.values, bottom, top);
  attach_exits(res, graph, spec, top);
  return res;
}

FlowResult tau_flow(const CylinderSpec& spec, const CapacityAssignment& caps) {
  return tau_flow(build_cylinder(spec), spec, caps);
}

FlowResult phi_flow(const CylinderSpec& spec, const CapacityAssignment& caps) {
  return phi_flow(build_cylinder(spec), spec, caps);
}

std::string StreamViolation::describe(const LatticeGraph& graph) const {
  std::ostringstream os;
  auto point = [&graph](int v) {
    std::ostringstream p;
    p << "(";
    auto c = graph.vertex(v);
    for (size_t i = 0; i < c.size(); ++i) p << (i ? "," : "") << c[i];
    p << ")";
    return p.str();
  };
  switch (kind) {
    case CapacityExceeded:
      os << "capacity exceeded on edge " << point(graph.edges[edge].first)
         << "-" << point(graph.edges[edge].second) << " by " << amount;
      break;
    case NegativeThroughput:
      os << "negative throughput on edge " << point(graph.edges[edge].first)
         << "-" << point(graph.edges[edge].second);
      break;
    case Conservation:
      os << "conservation violated at vertex " << point(vertex)
         << " (imbalance " << amount << ")";
      break;
  }
  return os.str();
}

std::vector<StreamViolation> validate_stream(const LatticeGraph& graph,
                                             std::span<const double> caps,
                                             std::span<const int> sources,
                                             std::span<const int> sinks,
                                             const Stream& stream, double tol) {
  std::vector<StreamViolation> out;
  for (int e = 0; e < graph.num_edges(); ++e) {
    double g = e < static_cast<int>(stream.g.size()) ? stream.g[e] : 0.0;
    if (g < -tol)
      out.push_back({StreamViolation::NegativeThroughput, e, -1, g});
    if (g > caps[e] + tol)
      out.push_back({StreamViolation::CapacityExceeded, e, -1, g - caps[e]});
  }
  std::vector<uint8_t> terminal(graph.num_vertices(), 0);
  for (int v : sources) terminal[v] = 1;
  for (int v : sinks) terminal[v] = 1;
  std::vector<double> balance(graph.num_vertices(), 0.0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    if (e >= static_cast<int>(stream.orient.size()) || stream.orient[e] == 0)
      continue;
    auto [lo, hi] = graph.edges[e];
    int from = stream.orient[e] > 0 ? lo : hi;
    int to = stream.orient[e] > 0 ? hi : lo;
    balance[from] -= stream.g[e];
    balance[to] += stream.g[e];
  }
  for (const auto& exit : stream.exits) balance[exit.vertex] -= exit.g;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    if (terminal[v]) continue;
    if (std::fabs(balance[v]) > tol)
      out.push_back({StreamViolation::Conservation, -1, v, balance[v]});
  }
  return out;
}

double flow_value(const Stream& stream, const LatticeGraph& graph,
                  std::span<const int> sinks, const CylinderSpec& region) {
  std::vector<uint8_t> is_sink(graph.num_vertices(), 0);
  for (int v : sinks) is_sink[v] = 1;
  double total = 0.0;
  for (const auto& exit : stream.exits) {
    if (!is_sink[exit.vertex]) continue;
    if (point_in_cylinder(region, exit.outside)) continue;
    total += exit.g;  // exit legs are oriented outward by construction
  }
  return total;
}

namespace {

template <class Cap>
Cap bruteforce(const LatticeGraph& graph, std::span<const Cap> caps,
               std::span<const int> sources, std::span<const int> sinks) {
  const int m = graph.num_edges();
  if (m > 16) throw Error(Err::OracleSize, "brute force limited to 16 edges");
  if (sources.empty() || sinks.empty())
    throw Error(Err::InvalidInput, "empty terminal set");
  const int n = graph.num_vertices();
  std::vector<uint8_t> sink_mask(n, 0);
  for (int v : sinks) sink_mask[v] = 1;

  auto disconnects = [&](unsigned removed) {
    std::vector<uint8_t> seen(n, 0);
    std::vector<int> stack(sources.begin(), sources.end());
    for (int v : sources) seen[v] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (sink_mask[u]) return false;
      for (int a = graph.adj_offset[u]; a < graph.adj_offset[u + 1]; ++a) {
        auto [w, e] = graph.adj[a];
        if (removed & (1u << e)) continue;
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return true;
  };

  bool found = false;
  Cap best = 0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    Cap v = 0;
    for (int e = 0; e < m; ++e)
      if (mask & (1u << e)) v += caps[e];
    if (found && v >= best) continue;
    if (disconnects(mask)) {
      best = v;
      found = true;
    }
  }
  if (!found)
    throw Error(Err::InvalidInput, "terminals overlap: no cut exists");
  return best;
}

}  // namespace

double min_cut_bruteforce(const LatticeGraph& graph,
                          std::span<const double> caps,
                          std::span<const int> sources,
                          std::span<const int> sinks) {
  return bruteforce<double>(graph, caps, sources, sinks);
}

long long min_cut_bruteforce(const LatticeGraph& graph,
                             std::span<const long long> caps,
                             std::span<const int> sources,
                             std::span<const int> sinks) {
  return bruteforce<long long>(graph, caps, sources, sinks);
}

void write_dimacs(std::ostream& os, const LatticeGraph& graph,
                  std::span<const long long> caps,
                  std::span<const int> sources, std::span<const int> sinks) {
  long long inf = 1;
  for (long long c : caps) inf += c;
  const int n = graph.num_vertices();
  // virtual terminals become explicit nodes n+1 and n+2 (1-based ids)
  os << "c lattice cylinder max-flow instance\n";
  os << "p max " << n + 2 << " "
     << graph.num_edges() * 2 + sources.size() + sinks.size() << "\n";
  os << "n " << n + 1 << " s\n";
  os << "n " << n + 2 << " t\n";
  for (int e = 0; e < graph.num_edges(); ++e) {
    auto [u, v] = graph.edges[e];
    os << "a " << u + 1 << " " << v + 1 << " " << caps[e] << "\n";
    os << "a " << v + 1 << " " << u + 1 << " " << caps[e] << "\n";
  }
  for (int v : sources) os << "a " << n + 1 << " " << v + 1 << " " << inf << "\n";
  for (int v : sinks) os << "a " << v + 1 << " " << n + 2 << " " << inf << "\n";
}

}  // namespace fpplab
