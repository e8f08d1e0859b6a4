#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fpplab/errors.hpp"
#include "fpplab/fuzz.hpp"
#include "fpplab/maxflow.hpp"

using namespace fpplab;

namespace {

CylinderSpec straight2(long long n_len, const Rat& h) {
  CylinderSpec spec;
  spec.normal.v = {0, 1};
  spec.base.anchor = {Rat(0), Rat(0)};
  spec.base.frame = {{1, 0}};
  spec.base.side_lengths = {Rat(n_len)};
  spec.base.scale = 1;
  spec.height_fn = {HeightRule::Const, h.sign() > 0 ? h : Rat(1)};
  spec.height = h;
  return spec;
}

int vid(const LatticeGraph& g, std::vector<long long> p) {
  int i = g.vertex_index(p);
  REQUIRE(i >= 0);
  return i;
}

}  // namespace

TEST_CASE("single edge instance") {
  CylinderSpec spec = straight2(1, Rat(0));
  LatticeGraph g = build_cylinder(spec);  // two vertices, one edge
  std::vector<long long> caps{3};
  std::vector<int> s{vid(g, {0, 0})}, t{vid(g, {1, 0})};
  FlowResult res = max_flow(g, caps, s, t);
  CHECK(res.value_int == 3);
  CHECK(res.exact);
  REQUIRE(res.cut_edges.size() == 1);
  CHECK(res.cut_edges[0] == 0);
  CHECK(min_cut_bruteforce(g, caps, s, t) == 3);
}

TEST_CASE("zero capacities give a zero flow and an idle stream") {
  CylinderSpec spec = straight2(2, Rat(1));
  LatticeGraph g = build_cylinder(spec);
  std::vector<double> caps(g.num_edges(), 0.0);
  auto upper = g.tagged(kTagHalfUpper);
  auto lower = g.tagged(kTagHalfLower);
  FlowResult res = max_flow(g, caps, upper, lower);
  CHECK(res.value == 0.0);
  for (double v : res.stream.g) CHECK(v == 0.0);
  CapacityAssignment zero;
  zero.values.assign(g.num_edges(), 0.0);
  CHECK(tau_flow(g, spec, zero).value == 0.0);
  CHECK(phi_flow(g, spec, zero).value == 0.0);
}

TEST_CASE("unit capacities across a small cylinder") {
  CylinderSpec spec = straight2(2, Rat(1));
  LatticeGraph g = build_cylinder(spec);
  std::vector<long long> caps(g.num_edges(), 1);
  auto upper = g.tagged(kTagHalfUpper);
  auto lower = g.tagged(kTagHalfLower);
  FlowResult res = max_flow(g, caps, upper, lower);
  CHECK(res.value_int == 3);
  CHECK(min_cut_bruteforce(g, caps, upper, lower) == 3);
}

TEST_CASE("terminal validation") {
  CylinderSpec spec = straight2(2, Rat(1));
  LatticeGraph g = build_cylinder(spec);
  std::vector<long long> caps(g.num_edges(), 1);
  std::vector<int> s{0}, both{0, 1}, t{1};
  try {
    max_flow(g, caps, both, t);
    FAIL("expected invalid-input error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::InvalidInput);
  }
  CHECK_THROWS_AS(max_flow(g, caps, std::vector<int>{}, t), Error);
}

TEST_CASE("flow across a constant unit cylinder counts the columns") {
  CylinderSpec spec = straight2(10, Rat(5));
  LatticeGraph g = build_cylinder(spec);
  CapacityAssignment caps;
  caps.values.assign(g.num_edges(), 1.0);
  FlowResult tau = tau_flow(g, spec, caps);
  CHECK(tau.value == doctest::Approx(11.0));
  FlowResult phi = phi_flow(g, spec, caps);
  CHECK(phi.value == doctest::Approx(11.0));
  CHECK(phi.value <= tau.value + 1e-9);

  SUBCASE("stream validates and the declared flow matches") {
    auto upper = g.tagged(kTagHalfUpper);
    auto lower = g.tagged(kTagHalfLower);
    CHECK(validate_stream(g, caps.values, upper, lower, tau.stream).empty());
    CHECK(flow_value(tau.stream, g, lower, spec) ==
          doctest::Approx(tau.value));
  }
  SUBCASE("zero stream has zero flow value") {
    Stream idle;
    idle.g.assign(g.num_edges(), 0.0);
    idle.orient.assign(g.num_edges(), 0);
    CHECK(flow_value(idle, g, g.tagged(kTagHalfLower), spec) == 0.0);
  }
}

TEST_CASE("degenerate cylinder rejected by the flow wrappers") {
  CylinderSpec spec = straight2(2, Rat(0));
  LatticeGraph g = build_cylinder(spec);
  CapacityAssignment caps;
  caps.values.assign(g.num_edges(), 1.0);
  try {
    tau_flow(g, spec, caps);
    FAIL("expected degenerate-cylinder error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::DegenerateCylinder);
  }
}

TEST_CASE("hand stream on a three-vertex path") {
  CylinderSpec spec = straight2(2, Rat(0));
  LatticeGraph g = build_cylinder(spec);  // (0,0)-(1,0)-(2,0)
  REQUIRE(g.num_edges() == 2);
  Stream s;
  s.g = {0.75, 0.75};
  s.orient = {1, 1};  // toward increasing x
  s.exits.push_back({vid(g, {2, 0}), {3, 0}, 0.75});
  std::vector<int> f1{vid(g, {0, 0})}, f2{vid(g, {2, 0})};
  std::vector<double> caps{1.0, 1.0};
  CHECK(validate_stream(g, caps, f1, f2, s).empty());
  CHECK(flow_value(s, g, f2, spec) == doctest::Approx(0.75));
}

TEST_CASE("stream violations are reported by kind") {
  CylinderSpec spec = straight2(2, Rat(1));
  LatticeGraph g = build_cylinder(spec);
  std::vector<double> caps(g.num_edges(), 1.0);
  auto upper = g.tagged(kTagHalfUpper);
  auto lower = g.tagged(kTagHalfLower);
  FlowResult res = max_flow(g, caps, upper, lower);

  SUBCASE("capacity violation") {
    Stream s = res.stream;
    s.g[0] = caps[0] + 1.0;
    s.orient[0] = 1;
    auto v = validate_stream(g, caps, upper, lower, s);
    REQUIRE(!v.empty());
    bool found = false;
    for (const auto& violation : v)
      if (violation.kind == StreamViolation::CapacityExceeded &&
          violation.edge == 0)
        found = true;
    CHECK(found);
  }
  SUBCASE("conservation violation names the vertex") {
    Stream s = res.stream;
    int victim = -1;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (g.tags[v] == 0) victim = v;
    REQUIRE(victim >= 0);
    int e = g.adj[g.adj_offset[victim]].second;
    s.g[e] += 0.5;
    if (s.orient[e] == 0) s.orient[e] = 1;
    auto v = validate_stream(g, caps, upper, lower, s);
    bool found = false;
    for (const auto& violation : v)
      if (violation.kind == StreamViolation::Conservation) found = true;
    CHECK(found);
  }
}

TEST_CASE("two parallel paths oracle") {
  CylinderSpec spec = straight2(1, Rat(1));
  LatticeGraph full = build_cylinder(spec);
  // keep the four edges of the square on rows y in {0, 1}
  std::vector<int> keep;
  auto edge_between = [&](std::vector<long long> a, std::vector<long long> b) {
    return full.edge_index(vid(full, a), vid(full, b));
  };
  int e_bottom = edge_between({0, 0}, {1, 0});
  int e_left = edge_between({0, 0}, {0, 1});
  int e_right = edge_between({1, 0}, {1, 1});
  int e_top = edge_between({0, 1}, {1, 1});
  LatticeGraph g = subgraph_with_edges(full, {e_bottom, e_left, e_right, e_top});
  std::vector<long long> caps(4, 0);
  caps[g.edge_index(vid(g, {0, 0}), vid(g, {1, 0}))] = 1;
  caps[g.edge_index(vid(g, {0, 0}), vid(g, {0, 1}))] = 2;
  caps[g.edge_index(vid(g, {1, 0}), vid(g, {1, 1}))] = 5;
  caps[g.edge_index(vid(g, {0, 1}), vid(g, {1, 1}))] = 4;
  std::vector<int> s{vid(g, {0, 0})}, t{vid(g, {1, 1})};
  CHECK(min_cut_bruteforce(g, caps, s, t) == 3);
  CHECK(max_flow(g, caps, s, t).value_int == 3);
}

TEST_CASE("oracle size limit") {
  CylinderSpec spec = straight2(10, Rat(2));
  LatticeGraph g = build_cylinder(spec);
  REQUIRE(g.num_edges() > 16);
  std::vector<long long> caps(g.num_edges(), 1);
  try {
    min_cut_bruteforce(g, caps, g.tagged(kTagHalfUpper),
                       g.tagged(kTagHalfLower));
    FAIL("expected oracle-size error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::OracleSize);
  }
}

TEST_CASE("solver equals the exhaustive oracle on random instances") {
  for (int i = 0; i < 60; ++i) {
    SmallInstance inst = random_small_instance(2024, i);
    long long solver =
        max_flow(inst.graph, inst.caps, inst.sources, inst.sinks).value_int;
    long long oracle =
        min_cut_bruteforce(inst.graph, inst.caps, inst.sources, inst.sinks);
    CHECK(solver == oracle);
  }
}

TEST_CASE("duality is exact in integer mode") {
  for (int i = 0; i < 20; ++i) {
    CylinderSpec spec = random_cylinder_spec(5, i, 6);
    DistributionSpec dist = random_distribution(5, i);
    LatticeGraph g = build_cylinder(spec);
    CapacityAssignment caps = sample_capacities(g, dist, 5, i);
    auto ints = quantize(caps, 4096);
    auto upper = g.tagged(kTagHalfUpper);
    auto lower = g.tagged(kTagHalfLower);
    FlowResult res = max_flow(g, ints, upper, lower);
    long long cut = 0;
    for (int e : res.cut_edges) cut += ints[e];
    CHECK(cut == res.value_int);
    // the cut really separates: no residual path means the partition splits
    for (int v : upper) CHECK(res.source_side[v] == 1);
    for (int v : lower) CHECK(res.source_side[v] == 0);
  }
}

TEST_CASE("raising one capacity never lowers the flow") {
  CylinderSpec spec = random_cylinder_spec(8, 3, 5);
  LatticeGraph g = build_cylinder(spec);
  CapacityAssignment caps =
      sample_capacities(g, DistributionSpec::parse("uniform:1"), 8, 0);
  FlowResult base = tau_flow(g, spec, caps);
  for (int e = 0; e < g.num_edges(); e += 3) {
    CapacityAssignment bumped = caps;
    bumped.values[e] += 1.0;
    FlowResult res = tau_flow(g, spec, bumped);
    CHECK(res.value >= base.value - 1e-9);
  }
}

TEST_CASE("dimacs dump format") {
  CylinderSpec spec = straight2(1, Rat(0));
  LatticeGraph g = build_cylinder(spec);
  std::vector<long long> caps{3};
  std::vector<int> s{0}, t{1};
  std::ostringstream os;
  write_dimacs(os, g, caps, s, t);
  std::string text = os.str();
  CHECK(text.find("p max 4 4") != std::string::npos);
  CHECK(text.find("n 3 s") != std::string::npos);
  CHECK(text.find("n 4 t") != std::string::npos);
  CHECK(text.find("a 1 2 3") != std::string::npos);
}
