#include "fpplab/sampling.hpp"

#include <cmath>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPi = 6.283185307179586476925;

inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

uint64_t counter_hash(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (a + kGolden));
  h = mix64(h ^ (b + kGolden));
  h = mix64(h ^ (c + kGolden));
  return h;
}

double counter_u01(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return (counter_hash(seed, a, b, c) >> 11) * 0x1.0p-53;
}

double sample_one(const DistributionSpec& dist, uint64_t seed,
                  uint64_t replication, uint64_t index) {
  double u = counter_u01(seed, replication, index, 0);
  switch (dist.kind) {
    case DistKind::Constant:
      return dist.param;
    case DistKind::Bernoulli:
      return u < dist.param ? 1.0 : 0.0;
    case DistKind::Uniform:
      return u * dist.param;
    case DistKind::Exponential:
      return -std::log1p(-u) / dist.param;
    case DistKind::HalfGaussian: {
      // Box-Muller on two independent counters
      double u2 = counter_u01(seed, replication, index, 1);
      double r = std::sqrt(-2.0 * std::log1p(-u));
      return dist.param * std::fabs(r * std::cos(kTwoPi * u2));
    }
  }
  return 0.0;
}

CapacityAssignment sample_capacities(const LatticeGraph& graph,
                                     const DistributionSpec& dist,
                                     uint64_t seed, uint64_t replication) {
  dist.validate();
  if (graph.num_vertices() == 0)
    throw Error(Err::EmptyGraph, "sampling on an empty graph");
  CapacityAssignment caps;
  caps.seed = seed;
  caps.replication = replication;
  caps.values.resize(graph.num_edges());
  for (int e = 0; e < graph.num_edges(); ++e)
    caps.values[e] = sample_one(dist, seed, replication, (uint64_t)e);
  return caps;
}

std::vector<long long> quantize(const CapacityAssignment& caps,
                                long long scale) {
  if (scale <= 0) throw Error(Err::InvalidInput, "quantize scale must be > 0");
  std::vector<long long> out(caps.values.size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = std::llround(caps.values[i] * static_cast<double>(scale));
  return out;
}

}  // namespace fpplab
