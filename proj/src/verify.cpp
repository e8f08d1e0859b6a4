#include "fpplab/verify.hpp"

#include <cmath>
#include <sstream>

#include "fpplab/crossing.hpp"
#include "fpplab/decomposition.hpp"
#include "fpplab/errors.hpp"
#include "fpplab/experiments.hpp"
#include "fpplab/fuzz.hpp"
#include "fpplab/maxflow.hpp"
#include "fpplab/rate_function.hpp"

namespace fpplab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

CheckResult check_oracle(uint64_t seed) {
  for (int i = 0; i < 50; ++i) {
    SmallInstance inst = random_small_instance(seed, i);
    bool overlap = false;
    {
      std::vector<uint8_t> s(inst.graph.num_vertices(), 0);
      for (int v : inst.sources) s[v] = 1;
      for (int v : inst.sinks)
        if (s[v]) overlap = true;
    }
    if (overlap) continue;
    long long solver =
        max_flow(inst.graph, inst.caps, inst.sources, inst.sinks).value_int;
    long long oracle =
        min_cut_bruteforce(inst.graph, inst.caps, inst.sources, inst.sinks);
    if (solver != oracle)
      return {"oracle-equivalence", false,
              "instance " + std::to_string(i) + ": solver " +
                  std::to_string(solver) + " vs oracle " +
                  std::to_string(oracle)};
  }
  return {"oracle-equivalence", true, "50 instances"};
}

CheckResult check_duality(uint64_t seed) {
  for (int i = 0; i < 60; ++i) {
    CylinderSpec spec = random_cylinder_spec(seed, 1000 + i, 6);
    DistributionSpec dist = random_distribution(seed, 1000 + i);
    LatticeGraph graph = build_cylinder(spec);
    CapacityAssignment caps = sample_capacities(graph, dist, seed, i);
    FlowResult tau = tau_flow(graph, spec, caps);
    double cut_value = 0;
    for (int e : tau.cut_edges) cut_value += caps.values[e];
    if (std::fabs(cut_value - tau.value) > 1e-9 * (1.0 + tau.value))
      return {"duality", false,
              "cut " + fmt(cut_value) + " vs flow " + fmt(tau.value)};
    FlowResult phi = phi_flow(graph, spec, caps);
    if (phi.value > tau.value + 1e-9 * (1.0 + tau.value))
      return {"duality", false,
              "phi " + fmt(phi.value) + " above tau " + fmt(tau.value)};
  }
  return {"duality", true, "60 fuzzed cylinders"};
}

CheckResult check_stream(uint64_t seed, const std::string& inject) {
  CylinderSpec spec = random_cylinder_spec(seed, 77, 6);
  DistributionSpec dist = random_distribution(seed, 77);
  LatticeGraph graph = build_cylinder(spec);
  CapacityAssignment caps = sample_capacities(graph, dist, seed, 0);
  auto upper = graph.tagged(kTagHalfUpper);
  auto lower = graph.tagged(kTagHalfLower);
  FlowResult res = max_flow(graph, caps.values, upper, lower);
  if (inject == "capacity_violation" && !res.stream.g.empty()) {
    res.stream.g[0] = caps.values[0] + 1.0;
    res.stream.orient[0] = 1;
  } else if (inject == "conservation_violation") {
    for (int v = 0; v < graph.num_vertices(); ++v)
      if (graph.tags[v] == 0 && graph.adj_offset[v + 1] > graph.adj_offset[v]) {
        int e = graph.adj[graph.adj_offset[v]].second;
        res.stream.g[e] += 0.5;
        if (res.stream.orient[e] == 0) res.stream.orient[e] = 1;
        break;
      }
  }
  auto violations = validate_stream(graph, caps.values, upper, lower,
                                    res.stream);
  if (!violations.empty())
    return {"stream-feasibility", false, violations.front().describe(graph)};
  return {"stream-feasibility", true, "solver stream is feasible"};
}

CheckResult check_gluing(uint64_t seed) {
  HeightFunction h{HeightRule::Linear, Rat(1)};
  SpecFamily fam = straight_family(2, {Rat(1)}, h);
  int done = 0;
  for (int i = 0; i < 6; ++i) {
    long long n = 3 + (i % 2);
    long long N = 12 + 4 * (i % 3);
    DecompositionPlan plan;
    try {
      plan = slab_decomposition(fam, N, n, Rat(4), MRule::Max);
    } catch (const Error& e) {
      return {"gluing", false, e.what()};
    }
    DistributionSpec dist = i % 2 == 0
                                ? DistributionSpec{DistKind::Exponential, 1.0}
                                : DistributionSpec{DistKind::Bernoulli, 0.7};
    CapacityAssignment caps =
        sample_capacities(plan.big_graph, dist, seed, 5000 + i);
    GluingReport rep = verify_cut_gluing(plan, caps);
    if (!rep.inequality_ok || !rep.phi_inequality_ok)
      return {"gluing", false,
              "covering inequality violated at n=" + std::to_string(n) +
                  " N=" + std::to_string(N)};
    if (!rep.separation_ok || !rep.phi_separation_ok)
      return {"gluing", false,
              "glued cut fails to separate at n=" + std::to_string(n) +
                  " N=" + std::to_string(N)};
    ++done;
  }
  return {"gluing", true, std::to_string(done) + " decompositions"};
}

CheckResult check_cardinality() {
  HeightFunction h{HeightRule::Linear, Rat(1)};
  SpecFamily fam = straight_family(2, {Rat(1)}, h);
  std::vector<CardinalityReport> reports;
  for (long long N : {16, 32}) {
    DecompositionPlan plan = slab_decomposition(fam, N, 4, Rat(4), MRule::Max);
    CardinalityReport rep = cardinality_bounds(plan);
    if (!(rep.c0 > 0) || !(rep.c1 > 0) || !std::isfinite(rep.c0) ||
        !std::isfinite(rep.c1))
      return {"cardinality", false, "degenerate fitted constant"};
    reports.push_back(rep);
  }
  LadderVariation var = ladder_variation(reports);
  return {"cardinality", true,
          "c0 step " + fmt(var.c0_max_step) + ", c1 step " +
              fmt(var.c1_max_step)};
}

CheckResult check_pinned_boundary() {
  HeightFunction h{HeightRule::Linear, Rat(1)};
  SpecFamily fam = straight_family(2, {Rat(1)}, h);
  int last_size = -1;
  for (long long n : {4, 8}) {
    CylinderSpec spec = fam.at(n);
    LatticeGraph graph = build_cylinder(spec);
    BoundaryWitness wit = pinned_boundary_witness(
        graph, spec, {Rat(0), Rat(0)}, Rat(4));
    if (last_size >= 0 && wit.size() != last_size)
      return {"pinned-boundary", false, "witness size depends on n"};
    last_size = wit.size();
    CapacityAssignment caps;
    caps.values.assign(graph.num_edges(), 0.0);
    for (int e : wit.path_edges) caps.values[e] = 1e6;
    FlowResult tau = tau_flow(graph, spec, caps);
    if (tau.value < 1e6 - 1e-3)
      return {"pinned-boundary", false,
              "tau " + fmt(tau.value) + " below the forced 1e6 at n=" +
                  std::to_string(n)};
  }
  return {"pinned-boundary", true,
          "witness size " + std::to_string(last_size)};
}

CheckResult check_disjoint_paths() {
  HeightFunction h{HeightRule::Const, Rat(5)};
  SpecFamily fam = straight_family(2, {Rat(1)}, h);
  CylinderSpec spec = fam.at(10);
  LatticeGraph graph = build_cylinder(spec);
  CrossingPaths paths = disjoint_crossing_paths(graph, spec, Rat(1));
  if (paths.count() < 10)
    return {"disjoint-paths", false,
            "only " + std::to_string(paths.count()) + " paths"};
  std::vector<uint8_t> used(graph.num_edges(), 0);
  for (const auto& p : paths.paths)
    for (int e : p) {
      if (used[e]) return {"disjoint-paths", false, "paths share an edge"};
      used[e] = 1;
    }
  return {"disjoint-paths", true, std::to_string(paths.count()) + " paths"};
}

CheckResult check_rate_arithmetic() {
  DistributionSpec expo{DistKind::Exponential, 1.0};
  double rate = cramer_rate(expo, 2.0);
  double want = 1.0 - std::log(2.0);
  if (std::fabs(rate - want) > 1e-6)
    return {"rate-function", false, "rate(2) = " + fmt(rate)};
  if (cramer_rate(expo, 1.0) > 1e-9)
    return {"rate-function", false, "rate at the mean is not zero"};
  double bound = chebyshev_tail_bound(expo, 10, 1.0, 100.0, 0.5);
  double want_bound = std::exp(-(100.0 * 0.25 - 10.0 * std::log(2.0)));
  if (std::fabs(bound / want_bound - 1.0) > 1e-9)
    return {"rate-function", false, "tail bound " + fmt(bound)};
  return {"rate-function", true, "closed forms reproduced"};
}

CheckResult check_determinism(uint64_t seed) {
  HeightFunction h{HeightRule::Linear, Rat(1)};
  SpecFamily fam = straight_family(2, {Rat(1)}, h);
  CylinderSpec spec = fam.at(6);
  LatticeGraph graph = build_cylinder(spec);
  DistributionSpec dist{DistKind::Exponential, 1.0};
  auto a = rescaled_tau_samples(graph, spec, dist, 64, seed, 1);
  auto b = rescaled_tau_samples(graph, spec, dist, 64, seed, 3);
  if (a != b)
    return {"determinism", false, "worker count changed the samples"};
  return {"determinism", true, "1 and 3 workers agree bitwise"};
}

}  // namespace

std::vector<CheckResult> run_verification(uint64_t seed, int workers,
                                          const std::string& inject) {
  (void)workers;
  std::vector<CheckResult> out;
  out.push_back(check_oracle(seed));
  out.push_back(check_duality(seed));
  out.push_back(check_stream(seed, inject));
  out.push_back(check_gluing(seed));
  out.push_back(check_cardinality());
  out.push_back(check_pinned_boundary());
  out.push_back(check_disjoint_paths());
  out.push_back(check_rate_arithmetic());
  out.push_back(check_determinism(seed));
  return out;
}

}  // namespace fpplab
