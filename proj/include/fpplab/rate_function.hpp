#pragma once

#include <span>
#include <vector>

#include "fpplab/distributions.hpp"

namespace fpplab {

// Legendre transform machinery for the upper-tail rate of i.i.d. sums.
// The grid is geometric on (0, theta_max]; theta_max is where the log
// moment generating function stops being trustworthy (divergence for the
// analytic form, fewer than 10 effective sample terms for the empirical
// one). The transform itself also considers theta = 0, so it is never
// negative.
struct RateFunction {
  std::vector<double> theta_grid;
  std::vector<double> logmgf_values;

  // sup over theta >= 0 of (theta*x - logmgf(theta)), refined between the
  // best grid neighbours.
  double legendre(double x) const;

  double logmgf_at(double theta) const;

  bool empirical = false;
  std::vector<double> samples;   // kept for refinement in empirical mode
  DistributionSpec dist;         // analytic mode
};

RateFunction make_rate_function(std::span<const double> samples);
RateFunction make_rate_function(const DistributionSpec& dist);

// Upper-tail rate at x from samples (empirical Cramer transform). Returns
// +infinity when every sample equals the same value != x.
double cramer_rate(std::span<const double> samples, double x);
double cramer_rate(const DistributionSpec& dist, double x);

// The Chebyshev/Markov exponential-moment tail bound
//   exp[ -H * (theta*eps/2 - l * logmgf(theta) / H) ]
// for the probability that l i.i.d. capacities sum past eps*H/2. Returns
// +infinity (vacuous) when the moment generating function diverges at theta.
double chebyshev_tail_bound(const DistributionSpec& dist, long long l,
                            double eps, double H, double theta);

}  // namespace fpplab
