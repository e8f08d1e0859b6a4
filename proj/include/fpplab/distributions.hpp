#pragma once

#include <string>

namespace fpplab {

enum class DistKind { Constant, Bernoulli, Uniform, Exponential, HalfGaussian };

enum class MomentClass {
  Bounded,         // bounded support
  SomeExpMoment,   // E exp(theta t) finite only for small theta
  AllExpMoments,   // finite for every theta
};

const char* moment_class_name(MomentClass m);

// Law of an edge capacity. Parameter meaning depends on the kind:
// constant(c), bernoulli(p) on {0,1}, uniform(0,b), exponential(rate),
// half_gaussian(sigma) = |N(0, sigma^2)|.
struct DistributionSpec {
  DistKind kind = DistKind::Exponential;
  double param = 1.0;

  void validate() const;
  double mean() const;
  MomentClass moment_class() const;
  // Support bound where it exists (bounded kinds only).
  bool support_bound(double* bound) const;

  std::string id() const;
  // Parses "kind:param" strings such as "exponential:1" or "bernoulli:0.7".
  static DistributionSpec parse(const std::string& s);
};

// log E exp(theta * t) in closed form (numeric quadrature for the
// half-gaussian kind, absolute error <= 1e-10). Returns +infinity where the
// integral diverges. theta must be >= 0.
double log_mgf(const DistributionSpec& dist, double theta);

}  // namespace fpplab
