#include "fpplab/fuzz.hpp"

#include <algorithm>

#include "fpplab/errors.hpp"
#include "fpplab/sampling.hpp"

namespace fpplab {

namespace {

uint64_t draw(uint64_t seed, uint64_t index, uint64_t slot) {
  return counter_hash(seed, index, slot, 0x66757a7aULL);
}

double draw01(uint64_t seed, uint64_t index, uint64_t slot) {
  return (draw(seed, index, slot) >> 11) * 0x1.0p-53;
}

struct Orientation {
  int dim;
  std::vector<long long> normal;
};

const std::vector<Orientation>& catalog() {
  static const std::vector<Orientation> entries = {
      {2, {0, 1}},    {2, {1, 1}},    {2, {1, 2}},
      {3, {0, 0, 1}}, {3, {1, 1, 1}}, {3, {0, 1, 1}},
  };
  return entries;
}

}  // namespace

CylinderSpec random_cylinder_spec(uint64_t seed, uint64_t index,
                                  long long max_n) {
  for (uint64_t attempt = 0;; ++attempt) {
    uint64_t k = index * 97 + attempt;
    const auto& ori = catalog()[draw(seed, k, 1) % catalog().size()];
    CylinderSpec spec;
    spec.normal.v = ori.normal;
    spec.base.anchor.assign(ori.dim, Rat(0));
    spec.base.frame = orthogonal_frame(spec.normal);
    long long len = 1 + static_cast<long long>(draw(seed, k, 2) % 2);
    spec.base.side_lengths.assign(ori.dim - 1, Rat(len));
    spec.base.scale = 2 + static_cast<long long>(
                              draw(seed, k, 3) %
                              static_cast<uint64_t>(std::max<long long>(
                                  1, max_n - 1)));
    switch (draw(seed, k, 4) % 3) {
      case 0:
        spec.height_fn = {HeightRule::Linear, Rat(1)};
        break;
      case 1:
        spec.height_fn = {HeightRule::Sqrt, Rat(1)};
        break;
      default:
        spec.height_fn = {HeightRule::Const,
                          Rat(1 + (long long)(draw(seed, k, 5) % 3))};
        break;
    }
    spec.height = spec.height_fn.value(spec.base.scale);
    try {
      spec.validate();
      LatticeGraph g = build_cylinder(spec);
      if (!g.tagged(kTagHalfUpper).empty() &&
          !g.tagged(kTagHalfLower).empty() && !g.tagged(kTagTop).empty() &&
          !g.tagged(kTagBottom).empty())
        return spec;
    } catch (const Error&) {
      // fall through to the next attempt
    }
    if (attempt > 32)
      throw Error(Err::Consistency, "could not draw a usable cylinder");
  }
}

DistributionSpec random_distribution(uint64_t seed, uint64_t index) {
  DistributionSpec d;
  switch (draw(seed, index, 10) % 5) {
    case 0:
      d.kind = DistKind::Constant;
      d.param = 1.0 + (double)(draw(seed, index, 11) % 3);
      break;
    case 1:
      d.kind = DistKind::Bernoulli;
      d.param = 0.3 + 0.6 * draw01(seed, index, 11);
      break;
    case 2:
      d.kind = DistKind::Uniform;
      d.param = 0.5 + draw01(seed, index, 11);
      break;
    case 3:
      d.kind = DistKind::Exponential;
      d.param = 1.0;
      break;
    default:
      d.kind = DistKind::HalfGaussian;
      d.param = 0.5 + draw01(seed, index, 11);
      break;
  }
  return d;
}

SmallInstance random_small_instance(uint64_t seed, uint64_t index) {
  // 4x3 grid patch: 12 vertices, 17 candidate edges
  CylinderSpec spec;
  spec.normal.v = {0, 1};
  spec.base.anchor = {Rat(0), Rat(0)};
  spec.base.frame = {{1, 0}};
  spec.base.side_lengths = {Rat(3)};
  spec.base.scale = 1;
  spec.height_fn = {HeightRule::Const, Rat(1)};
  spec.height = Rat(1);
  LatticeGraph full = build_cylinder(spec);

  SmallInstance inst;
  std::vector<int> keep;
  for (int e = 0; e < full.num_edges(); ++e)
    if (draw01(seed, index, 100 + e) < 0.8) keep.push_back(e);
  while (static_cast<int>(keep.size()) > 16)
    keep.erase(keep.begin() + draw(seed, index, 200 + keep.size()) % keep.size());
  inst.graph = subgraph_with_edges(full, keep);

  const int n = inst.graph.num_vertices();
  for (;;) {
    inst.sources.clear();
    inst.sinks.clear();
    uint64_t round = draw(seed, index, 300);
    int ns = 1 + round % 3, nt = 1 + (round >> 8) % 3;
    std::vector<uint8_t> used(n, 0);
    for (int i = 0; i < ns; ++i) {
      int v = draw(seed, index, 310 + i) % n;
      if (!used[v]) {
        used[v] = 1;
        inst.sources.push_back(v);
      }
    }
    for (int i = 0; i < nt; ++i) {
      int v = draw(seed, index, 330 + i) % n;
      if (!used[v]) {
        used[v] = 2;
        inst.sinks.push_back(v);
      }
    }
    if (!inst.sources.empty() && !inst.sinks.empty()) break;
    index = index * 1315423911ULL + 1;
  }
  std::sort(inst.sources.begin(), inst.sources.end());
  std::sort(inst.sinks.begin(), inst.sinks.end());

  inst.caps.resize(inst.graph.num_edges());
  for (int e = 0; e < inst.graph.num_edges(); ++e)
    inst.caps[e] = draw(seed, index, 400 + e) % 8;
  return inst;
}

}  // namespace fpplab
