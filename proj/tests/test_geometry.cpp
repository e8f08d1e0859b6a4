#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "fpplab/errors.hpp"
#include "fpplab/geometry.hpp"
#include "fpplab/lattice_graph.hpp"

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

CylinderSpec tilted2(long long n_len, const Rat& h) {
  CylinderSpec spec;
  spec.normal.v = {1, 1};
  spec.base.anchor = {Rat(0), Rat(0)};
  spec.base.frame = {{1, -1}};
  spec.base.side_lengths = {Rat(n_len)};
  spec.base.scale = 1;
  spec.height_fn = {HeightRule::Const, h};
  spec.height = h;
  return spec;
}

// Independent membership oracle: coefficients of the point in the orthogonal
// (frame, normal) basis, each squared bound checked in rationals. Same
// mathematics as the production path, coded separately.
bool oracle_point_in(const CylinderSpec& spec, const std::vector<long long>& p) {
  const int d = spec.dim();
  std::vector<Rat> q(d);
  for (int i = 0; i < d; ++i) q[i] = Rat(p[i]) - spec.base.anchor[i];
  auto dot = [&](const std::vector<long long>& v) {
    Rat s(0);
    for (int i = 0; i < d; ++i) s += q[i] * Rat(v[i]);
    return s;
  };
  Rat sv = dot(spec.normal.v);
  Rat w(spec.normal.norm2());
  if (sv * sv > spec.height * spec.height * w) return false;
  for (size_t j = 0; j < spec.base.frame.size(); ++j) {
    Rat r = dot(spec.base.frame[j]);
    Rat f2(0);
    for (long long c : spec.base.frame[j]) f2 += Rat(c * c);
    Rat lim = Rat(spec.base.scale) * spec.base.side_lengths[j];
    if (r.sign() < 0 || r * r > lim * lim * f2) return false;
  }
  return true;
}

std::set<std::vector<long long>> vertex_set(const LatticeGraph& g,
                                            uint8_t mask) {
  std::set<std::vector<long long>> out;
  for (int v : g.tagged(mask)) out.insert(g.vertex(v));
  return out;
}

}  // namespace

TEST_CASE("rational arithmetic basics") {
  CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
  CHECK(Rat(-4, 8) == Rat(-1, 2));
  CHECK(Rat(7, 3).floor() == 2);
  CHECK(Rat(-7, 3).floor() == -3);
  CHECK(Rat(7, 3).ceil() == 3);
  CHECK(Rat::parse("3/4") == Rat(3, 4));
  CHECK(Rat::parse("0.25") == Rat(1, 4));
  CHECK(Rat::parse("-2") == Rat(-2));
  CHECK(Rat(2, 4).str() == "1/2");
  CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
}

TEST_CASE("exact radical signs") {
  CHECK(sign_with_radical(3, -2, 2) == 1);   // 3 - 2*sqrt(2) > 0
  CHECK(sign_with_radical(2, -2, 2) == -1);  // 2 - 2*sqrt(2) < 0
  CHECK(sign_with_radical(0, 5, 3) == 1);
  CHECK(sign_with_radical(-8, 3, 7) == -1);  // 3*sqrt(7) = 7.94
  CHECK(sign_with_radical(-9, 3, 9) == 0);
  CHECK(sign_with_radicals(1, 1, 2, -1, 3) == 1);   // 1 + sqrt2 - sqrt3
  CHECK(sign_with_radicals(1, 1, 2, -1, 8) == -1);  // 1 + sqrt2 - sqrt8
  CHECK(sign_with_radicals(0, 2, 2, -2, 2) == 0);
}

TEST_CASE("radical signs agree with long-double arithmetic off the margin") {
  uint64_t state = 12345;
  auto next = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<long long>((state >> 33) % 41) - 20;
  };
  int compared = 0;
  for (int i = 0; i < 4000; ++i) {
    long long a = next(), b = next(), c = next();
    long long w = std::abs(next()), f = std::abs(next());
    long double v = (long double)a + (long double)b * sqrtl((long double)w) +
                    (long double)c * sqrtl((long double)f);
    if (fabsl(v) < 1e-9L) continue;  // ambiguous for the oracle
    int want = v > 0 ? 1 : -1;
    CHECK(sign_with_radicals(a, b, w, c, f) == want);
    ++compared;
  }
  CHECK(compared > 3000);
}

TEST_CASE("axis-aligned edge membership") {
  CylinderSpec spec = straight2(2, Rat(1));
  CHECK(edge_in_region({1, 0}, {1, 1}, spec));
  CHECK_FALSE(edge_in_region({1, 1}, {1, 2}, spec));
  CHECK_THROWS_AS(edge_in_region({0, 0}, {1, 1}, spec), Error);
  SUBCASE("degenerate spec rejected") {
    CylinderSpec bad = spec;
    bad.height = Rat(-1);
    CHECK_THROWS_AS(edge_in_region({0, 0}, {0, 1}, bad), Error);
  }
}

TEST_CASE("tilted patch agrees with the independent oracle") {
  CylinderSpec spec = tilted2(3, Rat(5, 2));
  for (long long x = -4; x <= 6; ++x)
    for (long long y = -4; y <= 6; ++y) {
      std::vector<long long> p{x, y};
      CHECK(point_in_cylinder(spec, p) == oracle_point_in(spec, p));
      for (int axis = 0; axis < 2; ++axis) {
        std::vector<long long> q = p;
        ++q[axis];
        bool expect = oracle_point_in(spec, p) && oracle_point_in(spec, q);
        CHECK(edge_in_region(p, q, spec) == expect);
      }
    }
}

TEST_CASE("membership is representation independent") {
  // the same region written with unreduced rationals
  CylinderSpec a = tilted2(3, Rat(5, 2));
  CylinderSpec b = a;
  b.base.anchor = {Rat(0, 7), Rat(0, 13)};
  b.base.side_lengths = {Rat(21, 7)};
  b.height = Rat(35, 14);
  for (long long x = -4; x <= 6; ++x)
    for (long long y = -4; y <= 6; ++y)
      CHECK(point_in_cylinder(a, {x, y}) == point_in_cylinder(b, {x, y}));
}

TEST_CASE("small straight cylinder graph") {
  CylinderSpec spec = straight2(2, Rat(1));
  LatticeGraph g = build_cylinder(spec);
  CHECK(g.num_vertices() == 9);
  CHECK(g.num_edges() == 12);

  auto [upper, lower] = boundary_half_sets(g, spec);
  CHECK(vertex_set(g, kTagHalfUpper) ==
        std::set<std::vector<long long>>{{0, 1}, {1, 1}, {2, 1}});
  CHECK(vertex_set(g, kTagHalfLower) ==
        std::set<std::vector<long long>>{{0, -1}, {1, -1}, {2, -1}});
  CHECK(upper.size() == 3);
  CHECK(lower.size() == 3);

  auto [top, bottom] = top_bottom_sets(g, spec);
  CHECK(vertex_set(g, kTagTop) ==
        std::set<std::vector<long long>>{{0, 1}, {1, 1}, {2, 1}});
  CHECK(vertex_set(g, kTagBottom) ==
        std::set<std::vector<long long>>{{0, -1}, {1, -1}, {2, -1}});
  CHECK(top.size() == 3);
  CHECK(bottom.size() == 3);

  // vertices on the base hyperplane belong to neither half set
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.vertex(v)[1] == 0)
      CHECK((g.tags[v] & (kTagHalfUpper | kTagHalfLower)) == 0);
}

TEST_CASE("zero-height cylinder") {
  CylinderSpec spec = straight2(1, Rat(0));
  LatticeGraph g = build_cylinder(spec);
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.tagged(kTagHalfUpper).empty());
  CHECK(g.tagged(kTagHalfLower).empty());
  // the basis face coincides with the cylinder: both endpoints have an
  // outside neighbour whose joining segment meets it
  CHECK(vertex_set(g, kTagTop) ==
        std::set<std::vector<long long>>{{0, 0}, {1, 0}});
  CHECK(vertex_set(g, kTagBottom) ==
        std::set<std::vector<long long>>{{0, 0}, {1, 0}});
}

TEST_CASE("three dimensional vertex count") {
  CylinderSpec spec;
  spec.normal.v = {0, 0, 1};
  spec.base.anchor = {Rat(0), Rat(0), Rat(0)};
  spec.base.frame = {{1, 0, 0}, {0, 1, 0}};
  spec.base.side_lengths = {Rat(2), Rat(2)};
  spec.base.scale = 1;
  spec.height_fn = {HeightRule::Const, Rat(2)};
  spec.height = Rat(2);
  LatticeGraph g = build_cylinder(spec);
  CHECK(g.num_vertices() == 45);
}

TEST_CASE("empty cylinder errors") {
  // a tilted sliver holding no lattice point
  CylinderSpec spec = tilted2(1, Rat(1, 4));
  spec.base.anchor = {Rat(1, 3), Rat(1, 3)};
  spec.base.side_lengths = {Rat(1, 4)};
  try {
    build_cylinder(spec);
    FAIL("expected empty-graph error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::EmptyGraph);
  }
}

TEST_CASE("reflection symmetry of the boundary sets") {
  for (int variant = 0; variant < 2; ++variant) {
    CylinderSpec spec = variant == 0 ? straight2(3, Rat(2)) : tilted2(4, Rat(3));
    CylinderSpec flipped = spec;
    for (auto& c : flipped.normal.v) c = -c;
    LatticeGraph a = build_cylinder(spec);
    LatticeGraph b = build_cylinder(flipped);
    REQUIRE(a.num_vertices() == b.num_vertices());
    CHECK(a.edges == b.edges);
    CHECK(vertex_set(a, kTagHalfUpper) == vertex_set(b, kTagHalfLower));
    CHECK(vertex_set(a, kTagHalfLower) == vertex_set(b, kTagHalfUpper));
    CHECK(vertex_set(a, kTagTop) == vertex_set(b, kTagBottom));
    CHECK(vertex_set(a, kTagBottom) == vertex_set(b, kTagTop));
  }
}

TEST_CASE("integer translation invariance") {
  CylinderSpec spec = tilted2(3, Rat(2));
  CylinderSpec moved = spec;
  moved.base.anchor = {Rat(3), Rat(-2)};
  LatticeGraph a = build_cylinder(spec);
  LatticeGraph b = build_cylinder(moved);
  REQUIRE(a.num_vertices() == b.num_vertices());
  for (int v = 0; v < a.num_vertices(); ++v) {
    auto pa = a.vertex(v);
    auto pb = b.vertex(v);
    CHECK(pa[0] + 3 == pb[0]);
    CHECK(pa[1] - 2 == pb[1]);
    CHECK(a.tags[v] == b.tags[v]);
  }
  CHECK(a.edges == b.edges);
}

TEST_CASE("top and bottom sit inside the half boundaries") {
  for (const auto& spec :
       {straight2(3, Rat(1)), straight2(4, Rat(5, 2)), tilted2(4, Rat(2)),
        tilted2(5, Rat(7, 2))}) {
    LatticeGraph g = build_cylinder(spec);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (g.tags[v] & kTagTop) CHECK((g.tags[v] & kTagHalfUpper) != 0);
      if (g.tags[v] & kTagBottom) CHECK((g.tags[v] & kTagHalfLower) != 0);
    }
  }
}

TEST_CASE("face crossings agree with a floating-point oracle off the margin") {
  // Double-precision reimplementation of the face test; cases the doubles
  // cannot call safely (within 1e-6 of a boundary) are skipped, everything
  // else must match the exact predicate.
  auto oracle = [](const CylinderSpec& spec, const std::vector<long long>& x,
                   const std::vector<long long>& y, int side,
                   bool* decidable) {
    const int d = spec.dim();
    double w = std::sqrt(static_cast<double>(spec.normal.norm2()));
    auto tcoord = [&](const std::vector<long long>& p) {
      double s = 0;
      for (int i = 0; i < d; ++i)
        s += (p[i] - spec.base.anchor[i].dbl()) * spec.normal.v[i];
      return s / w;
    };
    const double h = spec.height.dbl();
    const double margin = 1e-6;
    *decidable = true;
    double tx = tcoord(x), ty = tcoord(y);
    if (std::fabs(tx - side * h) < margin || std::fabs(ty - side * h) < margin) {
      *decidable = false;
      return false;
    }
    if (side * tx > h) return false;  // x beyond the face: not a crossing
    if (side * ty < h) return false;
    double lambda = (side * h - tx) / (ty - tx);
    for (size_t j = 0; j < spec.base.frame.size(); ++j) {
      const auto& f = spec.base.frame[j];
      double fn = 0;
      for (long long c : f) fn += static_cast<double>(c) * c;
      fn = std::sqrt(fn);
      double rx = 0, ry = 0;
      for (int i = 0; i < d; ++i) {
        rx += (x[i] - spec.base.anchor[i].dbl()) * f[i];
        ry += (y[i] - spec.base.anchor[i].dbl()) * f[i];
      }
      double r = (rx + lambda * (ry - rx)) / fn;
      double lim = (Rat(spec.base.scale) * spec.base.side_lengths[j]).dbl();
      if (std::fabs(r) < margin || std::fabs(r - lim) < margin) {
        *decidable = false;
        return false;
      }
      if (r < 0 || r > lim) return false;
    }
    return true;
  };

  for (const auto& spec : {tilted2(4, Rat(3)), tilted2(5, Rat(5, 2))}) {
    LatticeGraph g = build_cylinder(spec);
    int compared = 0;
    for (int v = 0; v < g.num_vertices(); ++v) {
      for (const auto& y : outside_neighbours(g, spec, v)) {
        for (int side : {1, -1}) {
          bool decidable = false;
          bool approx = oracle(spec, g.vertex(v), y, side, &decidable);
          if (!decidable) continue;
          CHECK(segment_meets_face(spec, g.vertex(v), y, side) == approx);
          ++compared;
        }
      }
    }
    CHECK(compared > 20);
  }
}

TEST_CASE("height rules") {
  CHECK(HeightFunction{HeightRule::Linear, Rat(1)}.value(7) == Rat(7));
  CHECK(HeightFunction{HeightRule::Linear, Rat(1, 2)}.value(10) == Rat(5));
  CHECK(HeightFunction{HeightRule::Linear, Rat(1, 2)}.value(9) == Rat(5));
  CHECK(HeightFunction{HeightRule::Sqrt, Rat(1)}.value(4) == Rat(2));
  CHECK(HeightFunction{HeightRule::Sqrt, Rat(1)}.value(5) == Rat(3));
  CHECK(HeightFunction{HeightRule::Quadratic, Rat(1)}.value(5) == Rat(25));
  CHECK(HeightFunction{HeightRule::Const, Rat(3)}.value(100) == Rat(3));
  CHECK(HeightFunction{HeightRule::Log, Rat(2)}.value(9) == Rat(5));
}

TEST_CASE("orthogonal frame generation") {
  for (const auto& v : std::vector<std::vector<long long>>{
           {1, 1}, {1, 2}, {0, 1}, {1, 1, 1}, {0, 1, 1}, {2, 1, 3}}) {
    Direction normal{v};
    auto frame = orthogonal_frame(normal);
    REQUIRE(frame.size() == v.size() - 1);
    for (size_t i = 0; i < frame.size(); ++i) {
      long long dn = 0;
      for (size_t k = 0; k < v.size(); ++k) dn += frame[i][k] * v[k];
      CHECK(dn == 0);
      for (size_t j = i + 1; j < frame.size(); ++j) {
        long long dd = 0;
        for (size_t k = 0; k < v.size(); ++k) dd += frame[i][k] * frame[j][k];
        CHECK(dd == 0);
      }
    }
  }
}

TEST_CASE("spec serialization round trip") {
  CylinderSpec spec = tilted2(3, Rat(3));
  spec.base.anchor = {Rat(1, 2), Rat(-1, 2)};
  spec.base.scale = 4;
  spec.height_fn = {HeightRule::Linear, Rat(3, 4)};
  spec.height = spec.height_fn.value(4);
  auto kv = spec.to_kv();
  CylinderSpec back = CylinderSpec::from_kv(kv);
  CHECK(back.id() == spec.id());
  LatticeGraph a = build_cylinder(spec);
  LatticeGraph b = build_cylinder(back);
  CHECK(a.coords == b.coords);
  CHECK(a.edges == b.edges);
  CHECK(a.tags == b.tags);
}

TEST_CASE("invalid specs are rejected") {
  CylinderSpec spec = straight2(2, Rat(1));
  SUBCASE("zero normal") {
    spec.normal.v = {0, 0};
    CHECK_THROWS_AS(spec.validate(), Error);
  }
  SUBCASE("non-coprime normal") {
    spec.normal.v = {0, 2};
    CHECK_THROWS_AS(spec.validate(), Error);
  }
  SUBCASE("frame not orthogonal to normal") {
    spec.base.frame = {{1, 1}};
    CHECK_THROWS_AS(spec.validate(), Error);
  }
  SUBCASE("negative side length") {
    spec.base.side_lengths = {Rat(-1)};
    CHECK_THROWS_AS(spec.validate(), Error);
  }
}

TEST_CASE("area of the scaled basis") {
  CylinderSpec spec;
  spec.normal.v = {0, 0, 1};
  spec.base.anchor = {Rat(0), Rat(0), Rat(0)};
  spec.base.frame = {{1, 0, 0}, {0, 1, 0}};
  spec.base.side_lengths = {Rat(3, 2), Rat(2)};
  spec.base.scale = 4;
  CHECK(spec.base.area() == Rat(48));
}
