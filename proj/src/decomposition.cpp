#include "fpplab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fpplab/errors.hpp"
#include "json.hpp"

namespace fpplab {

namespace {

long long isqrt_floor(long long v) {
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

struct UnitFrame {
  std::vector<double> vhat;                // unit normal
  std::vector<std::vector<double>> fhat;   // unit frame directions
  std::vector<double> anchor;
};

UnitFrame unit_frame(const CylinderSpec& spec) {
  const int d = spec.dim();
  UnitFrame uf;
  uf.vhat.resize(d);
  uf.anchor.resize(d);
  double w = std::sqrt(static_cast<double>(spec.normal.norm2()));
  for (int i = 0; i < d; ++i) uf.vhat[i] = spec.normal.v[i] / w;
  for (int i = 0; i < d; ++i) uf.anchor[i] = spec.base.anchor[i].dbl();
  for (const auto& f : spec.base.frame) {
    double fn = 0;
    for (long long c : f) fn += static_cast<double>(c) * c;
    fn = std::sqrt(fn);
    std::vector<double> u(d);
    for (int i = 0; i < d; ++i) u[i] = f[i] / fn;
    uf.fhat.push_back(u);
  }
  return uf;
}

// Cylinder coordinates (base coordinates s_j and height t) of every vertex.
struct VertexCoords {
  std::vector<double> s;  // (d-1) * V
  std::vector<double> t;  // V
};

VertexCoords cylinder_coords(const LatticeGraph& g, const UnitFrame& uf) {
  const int d = g.dim;
  const int nb = d - 1;
  VertexCoords vc;
  vc.s.resize((size_t)nb * g.num_vertices());
  vc.t.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    double t = 0;
    for (int i = 0; i < d; ++i)
      t += (g.coords[(size_t)v * d + i] - uf.anchor[i]) * uf.vhat[i];
    vc.t[v] = t;
    for (int j = 0; j < nb; ++j) {
      double s = 0;
      for (int i = 0; i < d; ++i)
        s += (g.coords[(size_t)v * d + i] - uf.anchor[i]) * uf.fhat[j][i];
      vc.s[(size_t)v * nb + j] = s;
    }
  }
  return vc;
}

constexpr double kGeomEps = 1e-9;

}  // namespace

MRule m_rule_from_string(const std::string& s) {
  if (s == "max") return MRule::Max;
  if (s == "bounded") return MRule::BoundedRegime;
  if (s == "slow") return MRule::Slow;
  throw Error(Err::Config, "unknown M rule '" + s + "'");
}

std::string m_rule_name(MRule r) {
  switch (r) {
    case MRule::Max: return "max";
    case MRule::BoundedRegime: return "bounded";
    case MRule::Slow: return "slow";
  }
  return "?";
}

long long DecompositionPlan::max_card_e0() const {
  long long best = 0;
  for (const auto& e0 : glue_e0)
    best = std::max(best, static_cast<long long>(e0.size()));
  return best;
}

DecompositionPlan slab_decomposition(const SpecFamily& family, long long N,
                                     long long n, const Rat& zeta,
                                     MRule rule) {
  if (!(N >= n && n >= 1))
    throw Error(Err::InvalidInput, "need N >= n >= 1");
  const int d = family.normal.dim();
  if (zeta < Rat(2 * d))
    throw Error(Err::InvalidInput, "zeta must be at least 2d");

  DecompositionPlan plan;
  plan.n = n;
  plan.N = N;
  plan.zeta = zeta;
  plan.rule = rule;
  plan.small_spec = family.at(n);
  plan.big_spec = family.at(N);
  plan.h_small = plan.small_spec.height;
  plan.h_big = plan.big_spec.height;
  if (plan.h_small < Rat(1))
    throw Error(Err::DecompositionInfeasible, "small cylinder height below 1");

  const Rat half_slab = plan.h_small + zeta / Rat(2);  // h(n) + zeta/2
  long long m_max = (plan.h_big / half_slab).floor();
  long long M = m_max;
  switch (rule) {
    case MRule::Max:
      break;
    case MRule::BoundedRegime:
      M = std::min(M, (Rat(N) / (Rat(2) * half_slab)).floor());
      break;
    case MRule::Slow:
      M = std::min(M, isqrt_floor(N));
      break;
  }
  if (M < 1)
    throw Error(Err::DecompositionInfeasible,
                "no slab of height 2h(n)+zeta fits the cylinder");
  plan.M = static_cast<int>(M);
  plan.stack_halfheight = Rat(M) * half_slab;
  if (Rat(M) * (Rat(2) * plan.h_small + zeta) > Rat(2) * plan.h_big)
    throw Error(Err::Consistency, "slab stack exceeds the cylinder");

  // slots along each frame direction: width n*len + zeta
  const int nb = d - 1;
  plan.m = 1;
  std::vector<Rat> slot_width(nb);
  for (int j = 0; j < nb; ++j) {
    slot_width[j] = Rat(n) * family.base.side_lengths[j] + zeta;
    long long c = (Rat(N) * family.base.side_lengths[j] / slot_width[j]).floor();
    if (c < 1)
      throw Error(Err::DecompositionInfeasible,
                  "slot wider than the large basis");
    plan.slot_counts.push_back(c);
    plan.m *= c;
  }
  {
    Rat ratio(1);
    for (int j = 0; j < nb; ++j) ratio *= Rat(N) / Rat(n);
    plan.capacity_budget = ratio.floor();
  }
  if (plan.m > plan.capacity_budget)
    throw Error(Err::Consistency, "more slots than the area budget allows");

  plan.big_graph = build_cylinder(plan.big_spec);
  plan.box_graph = build_cylinder(plan.small_spec);

  const UnitFrame uf = unit_frame(plan.big_spec);
  const double zeta_d = zeta.dbl();

  // Place one box per slot. The real placement is snapped to the integer
  // lattice; the component of the correction along the normal is kept
  // nonnegative so a box base plane never drops below its slab equator.
  std::vector<uint8_t> claimed(plan.big_graph.num_vertices(), 0);
  for (int i = 1; i <= plan.M; ++i) {
    const Rat t_mid = half_slab * Rat(2 * i - 1 - plan.M);
    std::vector<long long> grid(nb, 0);
    for (long long jj = 0; jj < plan.m; ++jj) {
      PlacedBox box;
      box.slab = i;
      box.grid = grid;
      std::vector<double> w_real(d, 0.0);
      for (int j = 0; j < nb; ++j) {
        double off = (Rat(grid[j]) * slot_width[j]).dbl() + 0.5 * zeta_d;
        for (int c = 0; c < d; ++c) w_real[c] += off * uf.fhat[j][c];
      }
      for (int c = 0; c < d; ++c) w_real[c] += t_mid.dbl() * uf.vhat[c];
      box.shift.resize(d);
      box.u.resize(d);
      for (int c = 0; c < d; ++c) {
        double w = w_real[c];
        double nearest = std::floor(w + 0.5);
        long long snapped;
        if (std::fabs(w - nearest) < 1e-9) {
          snapped = static_cast<long long>(nearest);
        } else if (uf.vhat[c] > 0) {
          snapped = static_cast<long long>(std::ceil(w));
        } else if (uf.vhat[c] < 0) {
          snapped = static_cast<long long>(std::floor(w));
        } else {
          snapped = static_cast<long long>(nearest);
        }
        box.shift[c] = snapped;
        box.u[c] = snapped - w;
        if (std::fabs(box.u[c]) >= 1.0)
          throw Error(Err::Consistency, "snap correction reached 1");
      }

      // exact containment and disjointness checks on the lattice
      std::vector<int> vmap(plan.box_graph.num_vertices());
      std::vector<long long> p(d);
      for (int bv = 0; bv < plan.box_graph.num_vertices(); ++bv) {
        for (int c = 0; c < d; ++c)
          p[c] = plan.box_graph.coords[(size_t)bv * d + c] + box.shift[c];
        int gv = plan.big_graph.vertex_index(p);
        if (gv < 0)
          throw Error(Err::Consistency, "box vertex left the large cylinder");
        if (claimed[gv])
          throw Error(Err::Consistency, "boxes overlap");
        claimed[gv] = 1;
        vmap[bv] = gv;
      }
      std::vector<int> emap(plan.box_graph.num_edges());
      for (int be = 0; be < plan.box_graph.num_edges(); ++be) {
        auto [bu, bv] = plan.box_graph.edges[be];
        int ge = plan.big_graph.edge_index(vmap[bu], vmap[bv]);
        if (ge < 0)
          throw Error(Err::Consistency, "box edge missing from large graph");
        emap[be] = ge;
      }
      plan.boxes.push_back(std::move(box));
      plan.box_vertex_to_big.push_back(std::move(vmap));
      plan.box_edge_to_big.push_back(std::move(emap));

      // advance the slot grid
      int axis = nb - 1;
      while (axis >= 0) {
        if (++grid[axis] < plan.slot_counts[axis]) break;
        grid[axis] = 0;
        --axis;
      }
      if (axis < 0 && jj + 1 < plan.m)
        throw Error(Err::Consistency, "slot enumeration out of sync");
    }
  }

  // glue sets
  const VertexCoords vc = cylinder_coords(plan.big_graph, uf);
  const double stack = plan.stack_halfheight.dbl();
  std::vector<double> big_len(nb);
  for (int j = 0; j < nb; ++j)
    big_len[j] = (Rat(N) * family.base.side_lengths[j]).dbl();

  // E1: within 2*zeta of the lateral boundary, inside the slab stack
  {
    std::vector<uint8_t> in_shell(plan.big_graph.num_vertices(), 0);
    for (int v = 0; v < plan.big_graph.num_vertices(); ++v) {
      if (std::fabs(vc.t[v]) > stack + kGeomEps) continue;
      double dist = std::numeric_limits<double>::max();
      for (int j = 0; j < nb; ++j) {
        double s = vc.s[(size_t)v * nb + j];
        dist = std::min(dist, std::min(s, big_len[j] - s));
      }
      if (dist <= 2.0 * zeta_d + kGeomEps) in_shell[v] = 1;
    }
    for (int e = 0; e < plan.big_graph.num_edges(); ++e) {
      auto [u, v] = plan.big_graph.edges[e];
      if (in_shell[u] && in_shell[v]) plan.glue_e1.push_back(e);
    }
  }

  // E0_i: per slab, a horizontal band of half-thickness 3*zeta around the
  // slab equator, restricted to the neighbourhoods of the slot boundaries
  // plus the remainder of the slab left by the euclidean division.
  plan.glue_e0.resize(plan.M);
  std::vector<double> slot_w(nb);
  for (int j = 0; j < nb; ++j) slot_w[j] = slot_width[j].dbl();
  for (int i = 1; i <= plan.M; ++i) {
    const double t_mid = (half_slab * Rat(2 * i - 1 - plan.M)).dbl();
    const double t_lo = (half_slab * Rat(2 * (i - 1) - plan.M)).dbl();
    const double t_hi = (half_slab * Rat(2 * i - plan.M)).dbl();
    std::vector<uint8_t> flag(plan.big_graph.num_vertices(), 0);
    for (int v = 0; v < plan.big_graph.num_vertices(); ++v) {
      const double t = vc.t[v];
      if (std::fabs(t - t_mid) > 3.0 * zeta_d + kGeomEps) continue;
      const double* s = &vc.s[(size_t)v * nb];
      bool hit = false;
      // remainder of the slab outside the tiled block
      if (t >= t_lo - kGeomEps && t <= t_hi + kGeomEps) {
        for (int j = 0; j < nb && !hit; ++j)
          if (s[j] > plan.slot_counts[j] * slot_w[j] + kGeomEps) hit = true;
      }
      // neighbourhood of a slot boundary
      for (long long slot = 0; slot < plan.m && !hit; ++slot) {
        long long rem = slot;
        double inside_min = t_hi - t < t - t_lo ? t_hi - t : t - t_lo;
        double out2 = 0.0;
        if (t < t_lo) out2 += (t_lo - t) * (t_lo - t);
        if (t > t_hi) out2 += (t - t_hi) * (t - t_hi);
        bool outside = t < t_lo || t > t_hi;
        for (int j = nb - 1; j >= 0; --j) {
          long long k = rem % plan.slot_counts[j];
          rem /= plan.slot_counts[j];
          double lo = k * slot_w[j], hi = lo + slot_w[j];
          if (s[j] < lo) {
            outside = true;
            out2 += (lo - s[j]) * (lo - s[j]);
          } else if (s[j] > hi) {
            outside = true;
            out2 += (s[j] - hi) * (s[j] - hi);
          } else {
            inside_min = std::min(inside_min, std::min(s[j] - lo, hi - s[j]));
          }
        }
        double dist = outside ? std::sqrt(out2) : inside_min;
        if (dist <= 3.0 * zeta_d + kGeomEps) hit = true;
      }
      if (hit) flag[v] = 1;
    }
    auto& e0 = plan.glue_e0[i - 1];
    for (int e = 0; e < plan.big_graph.num_edges(); ++e) {
      auto [u, v] = plan.big_graph.edges[e];
      if (flag[u] && flag[v]) e0.push_back(e);
    }
  }
  return plan;
}

namespace {

// Whether any path joins the two tagged vertex sets once the marked edges
// are removed.
bool connects(const LatticeGraph& g, const std::vector<int>& from,
              const std::vector<uint8_t>& to_mask,
              const std::vector<uint8_t>& removed) {
  std::vector<uint8_t> seen(g.num_vertices(), 0);
  std::vector<int> stack;
  for (int v : from)
    if (!seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (to_mask[u]) return true;
    for (int a = g.adj_offset[u]; a < g.adj_offset[u + 1]; ++a) {
      auto [w, e] = g.adj[a];
      if (removed[e] || seen[w]) continue;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

}  // namespace

GluingReport verify_cut_gluing(const DecompositionPlan& plan,
                               const CapacityAssignment& caps) {
  if (static_cast<int>(caps.values.size()) != plan.big_graph.num_edges())
    throw Error(Err::Consistency, "capacities do not match the plan's graph");

  GluingReport rep;
  FlowResult big = tau_flow(plan.big_graph, plan.big_spec, caps);
  rep.tau_big = big.value;
  rep.phi_big = phi_flow(plan.big_graph, plan.big_spec, caps).value;

  auto box_upper = plan.box_graph.tagged(kTagHalfUpper);
  auto box_lower = plan.box_graph.tagged(kTagHalfLower);
  if (box_upper.empty() || box_lower.empty())
    throw Error(Err::DegenerateCylinder, "small cylinder has no half boundary");

  const int E = plan.big_graph.num_edges();
  rep.inequality_ok = true;
  rep.separation_ok = true;
  rep.phi_inequality_ok = true;
  rep.phi_separation_ok = true;
  std::vector<double> box_caps(plan.box_graph.num_edges());
  auto upper_big = plan.big_graph.tagged(kTagHalfUpper);
  auto top_big = plan.big_graph.tagged(kTagTop);
  std::vector<uint8_t> lower_mask(plan.big_graph.num_vertices(), 0);
  std::vector<uint8_t> bottom_mask(plan.big_graph.num_vertices(), 0);
  for (int v : plan.big_graph.tagged(kTagHalfLower)) lower_mask[v] = 1;
  for (int v : plan.big_graph.tagged(kTagBottom)) bottom_mask[v] = 1;

  const double tol = 1e-6 * (1.0 + std::fabs(rep.tau_big));
  for (int i = 1; i <= plan.M; ++i) {
    double sum_small = 0.0;
    std::vector<uint8_t> removed_e0(E, 0);  // box cuts plus E0_i
    for (int e : plan.glue_e0[i - 1]) removed_e0[e] = 1;
    for (long long j = 0; j < plan.m; ++j) {
      const auto& emap = plan.box_edge_to_big[plan.box_index(i, j)];
      for (int be = 0; be < plan.box_graph.num_edges(); ++be)
        box_caps[be] = caps.values[emap[be]];
      FlowResult small =
          max_flow(plan.box_graph, box_caps, box_upper, box_lower);
      sum_small += small.value;
      for (int ce : small.cut_edges) removed_e0[emap[ce]] = 1;
    }
    double glue_e0_value = 0.0;
    for (int e : plan.glue_e0[i - 1]) glue_e0_value += caps.values[e];
    std::vector<uint8_t> removed_full = removed_e0;
    std::vector<uint8_t> in_union(E, 0);
    for (int e : plan.glue_e0[i - 1]) in_union[e] = 1;
    double glue = glue_e0_value;
    for (int e : plan.glue_e1) {
      removed_full[e] = 1;
      if (!in_union[e]) {
        in_union[e] = 1;
        glue += caps.values[e];
      }
    }

    rep.sum_small.push_back(sum_small);
    rep.glue_value.push_back(glue);
    rep.slack.push_back(sum_small + glue - rep.tau_big);
    if (rep.slack.back() < -tol) rep.inequality_ok = false;
    rep.phi_slack.push_back(sum_small + glue_e0_value - rep.phi_big);
    if (rep.phi_slack.back() < -tol) rep.phi_inequality_ok = false;

    if (connects(plan.big_graph, upper_big, lower_mask, removed_full))
      rep.separation_ok = false;
    if (connects(plan.big_graph, top_big, bottom_mask, removed_e0))
      rep.phi_separation_ok = false;
  }
  return rep;
}

std::string GluingReport::to_json(const DecompositionPlan& plan) const {
  nlohmann::json j;
  j["n"] = plan.n;
  j["N"] = plan.N;
  j["zeta"] = plan.zeta.str();
  j["m_rule"] = m_rule_name(plan.rule);
  j["M"] = plan.M;
  j["boxes_per_slab"] = plan.m;
  j["capacity_budget"] = plan.capacity_budget;
  j["card_e1"] = plan.card_e1();
  j["max_card_e0"] = plan.max_card_e0();
  j["tau_big"] = tau_big;
  j["sum_small"] = sum_small;
  j["glue_value"] = glue_value;
  j["slack"] = slack;
  j["inequality_ok"] = inequality_ok;
  j["separation_ok"] = separation_ok;
  j["phi_big"] = phi_big;
  j["phi_slack"] = phi_slack;
  j["phi_inequality_ok"] = phi_inequality_ok;
  j["phi_separation_ok"] = phi_separation_ok;
  return j.dump(2);
}

CardinalityReport cardinality_bounds(const DecompositionPlan& plan) {
  CardinalityReport rep;
  rep.N = plan.N;
  rep.n = plan.n;
  rep.card_e1 = plan.card_e1();
  rep.max_card_e0 = plan.max_card_e0();
  const int d = plan.big_spec.dim();
  const double N = static_cast<double>(plan.N);
  const double n = static_cast<double>(plan.n);
  const double bound0 = std::pow(N, d - 1) / n + std::pow(N, d - 2) * n;
  const double bound1 =
      std::pow(N, d - 2) * plan.M * plan.h_small.dbl();
  rep.c0 = rep.max_card_e0 / bound0;
  rep.c1 = rep.card_e1 / bound1;
  return rep;
}

LadderVariation ladder_variation(
    const std::vector<CardinalityReport>& reports) {
  LadderVariation out;
  if (reports.size() < 2) return out;
  auto spread = [](std::vector<double> v, double* range_over_mean,
                   double* max_step) {
    double lo = v[0], hi = v[0], sum = 0.0;
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      sum += x;
    }
    *range_over_mean = (hi - lo) / (sum / v.size());
    double step = 0.0;
    for (size_t i = 1; i < v.size(); ++i)
      step = std::max(step, std::fabs(v[i] - v[i - 1]) /
                                std::min(v[i], v[i - 1]));
    *max_step = step;
  };
  std::vector<double> c0s, c1s;
  for (const auto& r : reports) {
    c0s.push_back(r.c0);
    c1s.push_back(r.c1);
  }
  spread(c0s, &out.c0_range_over_mean, &out.c0_max_step);
  spread(c1s, &out.c1_range_over_mean, &out.c1_max_step);
  return out;
}

}  // namespace fpplab
