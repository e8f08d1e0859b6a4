#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fpplab/distributions.hpp"
#include "fpplab/errors.hpp"
#include "fpplab/geometry.hpp"
#include "fpplab/sampling.hpp"

using namespace fpplab;

namespace {

LatticeGraph small_graph() {
  CylinderSpec spec;
  spec.normal.v = {0, 1};
  spec.base.anchor = {Rat(0), Rat(0)};
  spec.base.frame = {{1, 0}};
  spec.base.side_lengths = {Rat(4)};
  spec.base.scale = 1;
  spec.height_fn = {HeightRule::Const, Rat(2)};
  spec.height = Rat(2);
  return build_cylinder(spec);
}

// Closed form for the half-gaussian mgf: 2 exp(t^2 s^2 / 2) Phi(t s).
double halfgauss_logmgf_closed(double sigma, double theta) {
  double ts = theta * sigma;
  double phi = 0.5 * std::erfc(-ts / std::sqrt(2.0));
  return std::log(2.0) + 0.5 * ts * ts + std::log(phi);
}

}  // namespace

TEST_CASE("distribution parsing and validation") {
  CHECK(DistributionSpec::parse("exponential:1").kind == DistKind::Exponential);
  CHECK(DistributionSpec::parse("bernoulli:0.7").param == doctest::Approx(0.7));
  CHECK(DistributionSpec::parse("constant:2").mean() == 2.0);
  CHECK_THROWS_AS(DistributionSpec::parse("cauchy:1"), Error);
  CHECK_THROWS_AS(DistributionSpec::parse("bernoulli:1.5"), Error);
  CHECK_THROWS_AS(DistributionSpec::parse("uniform:0"), Error);
  CHECK_THROWS_AS(DistributionSpec::parse("half_gaussian:-1"), Error);
  try {
    DistributionSpec::parse("bernoulli:-0.1");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::InvalidDistribution);
  }
}

TEST_CASE("moment classes") {
  CHECK(DistributionSpec::parse("bernoulli:0.7").moment_class() ==
        MomentClass::Bounded);
  CHECK(DistributionSpec::parse("constant:1").moment_class() ==
        MomentClass::Bounded);
  CHECK(DistributionSpec::parse("uniform:2").moment_class() ==
        MomentClass::Bounded);
  CHECK(DistributionSpec::parse("exponential:1").moment_class() ==
        MomentClass::SomeExpMoment);
  CHECK(DistributionSpec::parse("half_gaussian:1").moment_class() ==
        MomentClass::AllExpMoments);
}

TEST_CASE("constant capacities are exactly constant") {
  LatticeGraph g = small_graph();
  auto caps = sample_capacities(g, DistributionSpec::parse("constant:1"), 1, 0);
  for (double v : caps.values) CHECK(v == 1.0);
}

TEST_CASE("sampling is a pure function of its key") {
  LatticeGraph g = small_graph();
  DistributionSpec dist = DistributionSpec::parse("bernoulli:0.5");
  auto a = sample_capacities(g, dist, 42, 7);
  auto b = sample_capacities(g, dist, 42, 7);
  CHECK(a.values == b.values);
  auto c = sample_capacities(g, dist, 42, 8);
  CHECK(a.values != c.values);
  auto d = sample_capacities(g, dist, 43, 7);
  CHECK(a.values != d.values);
}

TEST_CASE("exponential sample mean approaches 1") {
  DistributionSpec dist = DistributionSpec::parse("exponential:1");
  double sum = 0.0;
  const long long n = 1000000;
  for (long long i = 0; i < n; ++i) sum += sample_one(dist, 9, 0, i);
  CHECK(std::fabs(sum / n - 1.0) < 0.01);
}

TEST_CASE("log mgf closed forms") {
  DistributionSpec expo = DistributionSpec::parse("exponential:1");
  CHECK(log_mgf(expo, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(log_mgf(expo, 0.0) == 0.0);
  CHECK(std::isinf(log_mgf(expo, 1.0)));
  CHECK(std::isinf(log_mgf(expo, 2.0)));

  DistributionSpec c = DistributionSpec::parse("constant:3");
  CHECK(log_mgf(c, 0.25) == doctest::Approx(0.75));

  DistributionSpec bern = DistributionSpec::parse("bernoulli:0.7");
  CHECK(log_mgf(bern, 1.0) ==
        doctest::Approx(std::log(0.3 + 0.7 * std::exp(1.0))));

  DistributionSpec unif = DistributionSpec::parse("uniform:2");
  CHECK(log_mgf(unif, 1.0) ==
        doctest::Approx(std::log((std::exp(2.0) - 1.0) / 2.0)));
  CHECK(log_mgf(unif, 1e-12) == doctest::Approx(0.0).epsilon(1e-6));

  CHECK_THROWS_AS(log_mgf(expo, -0.5), Error);
}

TEST_CASE("half gaussian quadrature against the closed form") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    DistributionSpec hg{DistKind::HalfGaussian, sigma};
    for (double theta : {0.1, 0.5, 1.0, 3.0}) {
      double got = log_mgf(hg, theta);
      double want = halfgauss_logmgf_closed(sigma, theta);
      CHECK(std::fabs(got - want) < 1e-10);
    }
  }
}

TEST_CASE("log mgf is zero at zero and convex on a grid") {
  for (const char* id : {"constant:2", "bernoulli:0.4", "uniform:1.5",
                         "exponential:1", "half_gaussian:1"}) {
    DistributionSpec dist = DistributionSpec::parse(id);
    CHECK(log_mgf(dist, 0.0) == 0.0);
    std::vector<double> thetas, values;
    for (double t = 0.05; t < 0.9; t += 0.05) {
      double v = log_mgf(dist, t);
      if (!std::isfinite(v)) break;
      thetas.push_back(t);
      values.push_back(v);
    }
    for (size_t i = 1; i + 1 < values.size(); ++i) {
      double mid = 0.5 * (values[i - 1] + values[i + 1]);
      CHECK(values[i] <= mid + 1e-12);
    }
  }
}

TEST_CASE("empirical mgf matches the analytic one within 3 standard errors") {
  const long long n = 100000;
  for (const char* id : {"bernoulli:0.6", "uniform:1", "exponential:1",
                         "half_gaussian:1"}) {
    DistributionSpec dist = DistributionSpec::parse(id);
    for (double theta : {0.1, 0.25, 0.5}) {
      double target = log_mgf(dist, theta);
      if (!std::isfinite(target)) continue;
      double m = std::exp(target);
      double sum = 0.0, sumsq = 0.0;
      for (long long i = 0; i < n; ++i) {
        double w = std::exp(theta * sample_one(dist, 4, 1, i));
        sum += w;
        sumsq += w * w;
      }
      double mean = sum / n;
      double var = (sumsq / n - mean * mean) / n;
      double se = std::sqrt(var);
      CHECK(std::fabs(mean - m) < 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("quantized capacities are exact for lattice-valued laws") {
  LatticeGraph g = small_graph();
  auto caps = sample_capacities(g, DistributionSpec::parse("bernoulli:0.5"), 3, 0);
  auto ints = quantize(caps, 1);
  for (size_t i = 0; i < ints.size(); ++i) {
    CHECK((ints[i] == 0 || ints[i] == 1));
    CHECK(static_cast<double>(ints[i]) == caps.values[i]);
  }
  CHECK_THROWS_AS(quantize(caps, 0), Error);
}

TEST_CASE("half gaussian samples have the right first moments") {
  DistributionSpec hg{DistKind::HalfGaussian, 1.0};
  const long long n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (long long i = 0; i < n; ++i) {
    double v = sample_one(hg, 11, 0, i);
    CHECK(v >= 0.0);
    sum += v;
    sumsq += v * v;
  }
  CHECK(sum / n == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.02));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}
