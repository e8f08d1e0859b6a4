#include "fpplab/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kGridPoints = 64;
constexpr double kGridSpan = 256.0;  // theta_min = theta_max / span
constexpr double kMinEffectiveTerms = 10.0;

double empirical_logmgf(std::span<const double> samples, double theta) {
  double mx = *std::max_element(samples.begin(), samples.end());
  double acc = 0.0;
  for (double x : samples) acc += std::exp(theta * (x - mx));
  return theta * mx + std::log(acc / samples.size());
}

// Effective number of terms in the empirical mgf at theta.
double effective_terms(std::span<const double> samples, double theta) {
  double mx = *std::max_element(samples.begin(), samples.end());
  double s1 = 0.0, s2 = 0.0;
  for (double x : samples) {
    double w = std::exp(theta * (x - mx));
    s1 += w;
    s2 += w * w;
  }
  return s1 * s1 / s2;
}

std::vector<double> geometric_grid(double theta_max) {
  std::vector<double> grid(kGridPoints);
  double theta_min = theta_max / kGridSpan;
  double ratio = std::pow(kGridSpan, 1.0 / (kGridPoints - 1));
  double t = theta_min;
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = std::min(t, theta_max);
    t *= ratio;
  }
  grid.back() = theta_max;
  return grid;
}

}  // namespace

double RateFunction::logmgf_at(double theta) const {
  if (theta == 0.0) return 0.0;
  if (empirical) return empirical_logmgf(samples, theta);
  return log_mgf(dist, theta);
}

double RateFunction::legendre(double x) const {
  double best = 0.0;  // theta = 0 contributes 0
  int best_idx = -1;
  for (size_t i = 0; i < theta_grid.size(); ++i) {
    if (!std::isfinite(logmgf_values[i])) break;
    double v = theta_grid[i] * x - logmgf_values[i];
    if (v > best) {
      best = v;
      best_idx = static_cast<int>(i);
    }
  }
  // refine between the neighbours of the best grid point (the objective is
  // concave in theta)
  double lo = 0.0, hi = 0.0;
  if (best_idx < 0) {
    lo = 0.0;
    hi = theta_grid.empty() ? 0.0 : theta_grid.front();
  } else {
    lo = best_idx > 0 ? theta_grid[best_idx - 1] : 0.0;
    hi = best_idx + 1 < static_cast<int>(theta_grid.size())
             ? theta_grid[best_idx + 1]
             : theta_grid[best_idx];
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    double f1 = m1 * x - logmgf_at(m1);
    double f2 = m2 * x - logmgf_at(m2);
    if (!std::isfinite(f1)) {
      hi = m1;
      continue;
    }
    if (!std::isfinite(f2)) {
      hi = m2;
      continue;
    }
    if (f1 < f2)
      lo = m1;
    else
      hi = m2;
  }
  double mid = 0.5 * (lo + hi);
  double fm = mid * x - logmgf_at(mid);
  if (std::isfinite(fm)) best = std::max(best, fm);
  return best;
}

RateFunction make_rate_function(std::span<const double> samples) {
  if (samples.empty()) throw Error(Err::InvalidInput, "no samples");
  RateFunction rf;
  rf.empirical = true;
  rf.samples.assign(samples.begin(), samples.end());

  // cap theta where fewer than 10 sample terms dominate the mgf
  double lo = 1e-4, hi = 1e3;
  if (effective_terms(samples, hi) >= kMinEffectiveTerms) {
    // bounded-looking sample; the whole range is usable
  } else {
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (lo + hi);
      if (effective_terms(samples, mid) >= kMinEffectiveTerms)
        lo = mid;
      else
        hi = mid;
    }
    hi = lo;
  }
  rf.theta_grid = geometric_grid(hi);
  rf.logmgf_values.resize(rf.theta_grid.size());
  for (size_t i = 0; i < rf.theta_grid.size(); ++i)
    rf.logmgf_values[i] = empirical_logmgf(samples, rf.theta_grid[i]);
  return rf;
}

RateFunction make_rate_function(const DistributionSpec& dist) {
  dist.validate();
  RateFunction rf;
  rf.empirical = false;
  rf.dist = dist;
  double theta_max = 1e3;
  if (dist.kind == DistKind::Exponential)
    theta_max = dist.param * (1.0 - 0x1p-20);
  rf.theta_grid = geometric_grid(theta_max);
  rf.logmgf_values.resize(rf.theta_grid.size());
  for (size_t i = 0; i < rf.theta_grid.size(); ++i)
    rf.logmgf_values[i] = log_mgf(dist, rf.theta_grid[i]);
  return rf;
}

double cramer_rate(std::span<const double> samples, double x) {
  if (samples.empty()) throw Error(Err::InvalidInput, "no samples");
  if (x < 0) throw Error(Err::InvalidInput, "x must be >= 0");
  bool all_equal = true;
  for (double v : samples)
    if (v != samples[0]) {
      all_equal = false;
      break;
    }
  if (all_equal) return x == samples[0] ? 0.0 : kInf;
  return make_rate_function(samples).legendre(x);
}

double cramer_rate(const DistributionSpec& dist, double x) {
  if (x < 0) throw Error(Err::InvalidInput, "x must be >= 0");
  if (dist.kind == DistKind::Constant)
    return x == dist.param ? 0.0 : kInf;
  double bound;
  if (dist.support_bound(&bound) && x > bound) return kInf;
  return make_rate_function(dist).legendre(x);
}

double chebyshev_tail_bound(const DistributionSpec& dist, long long l,
                            double eps, double H, double theta) {
  if (theta < 0) throw Error(Err::InvalidInput, "theta must be >= 0");
  if (l < 0) throw Error(Err::InvalidInput, "l must be >= 0");
  double lambda = log_mgf(dist, theta);
  if (!std::isfinite(lambda)) return kInf;
  double exponent = -H * (theta * eps / 2.0) + static_cast<double>(l) * lambda;
  return std::exp(exponent);
}

}  // namespace fpplab
