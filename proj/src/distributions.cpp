#include "fpplab/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

// Adaptive Simpson quadrature on [a, b].
double simpson(double (*f)(double, double), double p, double a, double b) {
  auto whole = [](double a_, double b_, double fa, double fb, double fm) {
    return (b_ - a_) / 6.0 * (fa + 4.0 * fm + fb);
  };
  struct Frame {
    double a, b, fa, fb, fm, whole;
  };
  double fa = f(a, p), fb = f(b, p), fm = f(0.5 * (a + b), p);
  double total = 0.0;
  std::vector<Frame> stack{{a, b, fa, fb, fm, whole(a, b, fa, fb, fm)}};
  const double tol = 1e-13;
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    double m = 0.5 * (fr.a + fr.b);
    double fl = f(0.5 * (fr.a + m), p), fr2 = f(0.5 * (m + fr.b), p);
    double left = whole(fr.a, m, fr.fa, fr.fm, fl);
    double right = whole(m, fr.b, fr.fm, fr.fb, fr2);
    if (std::fabs(left + right - fr.whole) < 15.0 * tol ||
        fr.b - fr.a < 1e-12) {
      total += left + right + (left + right - fr.whole) / 15.0;
    } else {
      stack.push_back({fr.a, m, fr.fa, fr.fm, fl, left});
      stack.push_back({m, fr.b, fr.fm, fr.fb, fr2, right});
    }
  }
  return total;
}

// Half-gaussian mgf integrand after standardizing (x = sigma*u) and pulling
// out the exp(ts^2/2) factor: 2 phi(u) e^(ts u) = e^(ts^2/2) * g(u) with
// g(u) = sqrt(2/pi) exp(-(u - ts)^2 / 2). Keeps the quadrature bounded.
double halfgauss_integrand(double u, double ts) {
  double z = u - ts;
  return std::sqrt(2.0 / kPi) * std::exp(-0.5 * z * z);
}

}  // namespace

const char* moment_class_name(MomentClass m) {
  switch (m) {
    case MomentClass::Bounded: return "bounded";
    case MomentClass::SomeExpMoment: return "some_exp_moment";
    case MomentClass::AllExpMoments: return "all_exp_moments";
  }
  return "?";
}

void DistributionSpec::validate() const {
  switch (kind) {
    case DistKind::Constant:
      if (param < 0) throw Error(Err::InvalidDistribution, "constant c < 0");
      break;
    case DistKind::Bernoulli:
      if (!(param >= 0.0 && param <= 1.0))
        throw Error(Err::InvalidDistribution, "bernoulli p outside [0,1]");
      break;
    case DistKind::Uniform:
      if (!(param > 0.0))
        throw Error(Err::InvalidDistribution, "uniform b <= 0");
      break;
    case DistKind::Exponential:
      if (!(param > 0.0))
        throw Error(Err::InvalidDistribution, "exponential rate <= 0");
      break;
    case DistKind::HalfGaussian:
      if (!(param > 0.0))
        throw Error(Err::InvalidDistribution, "half_gaussian sigma <= 0");
      break;
  }
}

double DistributionSpec::mean() const {
  switch (kind) {
    case DistKind::Constant: return param;
    case DistKind::Bernoulli: return param;
    case DistKind::Uniform: return 0.5 * param;
    case DistKind::Exponential: return 1.0 / param;
    case DistKind::HalfGaussian: return param * std::sqrt(2.0 / kPi);
  }
  return 0.0;
}

MomentClass DistributionSpec::moment_class() const {
  switch (kind) {
    case DistKind::Constant:
    case DistKind::Bernoulli:
    case DistKind::Uniform:
      return MomentClass::Bounded;
    case DistKind::Exponential:
      return MomentClass::SomeExpMoment;
    case DistKind::HalfGaussian:
      return MomentClass::AllExpMoments;
  }
  return MomentClass::Bounded;
}

bool DistributionSpec::support_bound(double* bound) const {
  switch (kind) {
    case DistKind::Constant: *bound = param; return true;
    case DistKind::Bernoulli: *bound = 1.0; return true;
    case DistKind::Uniform: *bound = param; return true;
    default: return false;
  }
}

std::string DistributionSpec::id() const {
  std::string name;
  switch (kind) {
    case DistKind::Constant: name = "constant"; break;
    case DistKind::Bernoulli: name = "bernoulli"; break;
    case DistKind::Uniform: name = "uniform"; break;
    case DistKind::Exponential: name = "exponential"; break;
    case DistKind::HalfGaussian: name = "half_gaussian"; break;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s:%.12g", name.c_str(), param);
  return buf;
}

DistributionSpec DistributionSpec::parse(const std::string& s) {
  auto colon = s.find(':');
  std::string name = colon == std::string::npos ? s : s.substr(0, colon);
  DistributionSpec d;
  if (name == "constant") d.kind = DistKind::Constant;
  else if (name == "bernoulli") d.kind = DistKind::Bernoulli;
  else if (name == "uniform") d.kind = DistKind::Uniform;
  else if (name == "exponential") d.kind = DistKind::Exponential;
  else if (name == "half_gaussian") d.kind = DistKind::HalfGaussian;
  else
    throw Error(Err::InvalidDistribution, "unknown distribution '" + name + "'");
  d.param = colon == std::string::npos ? 1.0 : std::stod(s.substr(colon + 1));
  d.validate();
  return d;
}

double log_mgf(const DistributionSpec& dist, double theta) {
  dist.validate();
  if (theta < 0) throw Error(Err::InvalidInput, "theta must be >= 0");
  if (theta == 0) return 0.0;
  switch (dist.kind) {
    case DistKind::Constant:
      return theta * dist.param;
    case DistKind::Bernoulli: {
      double p = dist.param;
      return std::log(1.0 - p + p * std::exp(theta));
    }
    case DistKind::Uniform: {
      double tb = theta * dist.param;
      // log((e^tb - 1) / tb), stable near zero
      if (tb < 1e-8) return std::log1p(0.5 * tb + tb * tb / 6.0);
      return std::log(std::expm1(tb)) - std::log(tb);
    }
    case DistKind::Exponential: {
      double rate = dist.param;
      if (theta >= rate) return kInf;
      return -std::log1p(-theta / rate);
    }
    case DistKind::HalfGaussian: {
      double ts = theta * dist.param;
      double integral = simpson(&halfgauss_integrand, ts, 0.0, ts + 12.0);
      return 0.5 * ts * ts + std::log(integral);
    }
  }
  return 0.0;
}

}  // namespace fpplab
