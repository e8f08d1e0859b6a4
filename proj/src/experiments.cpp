#include "fpplab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "fpplab/errors.hpp"
#include "fpplab/maxflow.hpp"
#include "fpplab/sampling.hpp"
#include "json.hpp"

namespace fpplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Regularized incomplete beta I_x(a, b) via the continued fraction.
double betacf(double a, double b, double x) {
  const int kMaxIter = 300;
  const double eps = 3e-14, fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
              a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                        b * std::log(1.0 - x) + a * std::log(x)) *
                   betacf(b, a, 1.0 - x) / b;
}

// Inverse of I_x(a, b) by bisection; plenty for interval endpoints.
double inv_inc_beta(double a, double b, double p) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (inc_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void parallel_for(long long count, int workers,
                  const std::function<void(long long)>& fn) {
  if (workers <= 1 || count < 2) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  workers = static_cast<int>(std::min<long long>(workers, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long long i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> rescaled_tau_samples(const LatticeGraph& graph,
                                         const CylinderSpec& spec,
                                         const DistributionSpec& dist,
                                         long long reps, uint64_t seed,
                                         int workers) {
  if (reps < 1) throw Error(Err::InvalidInput, "reps must be >= 1");
  const double area = spec.base.area().dbl();
  std::vector<double> out(reps);
  parallel_for(reps, workers, [&](long long r) {
    CapacityAssignment caps =
        sample_capacities(graph, dist, seed, static_cast<uint64_t>(r));
    FlowResult res = tau_flow(graph, spec, caps);
    out[r] = res.value / area;
  });
  return out;
}

std::vector<NuEstimate> estimate_nu(const SpecFamily& family,
                                    const DistributionSpec& dist,
                                    std::span<const long long> n_list,
                                    long long reps, uint64_t seed, int workers,
                                    std::vector<std::string>* warnings) {
  if (reps < 1) throw Error(Err::InvalidInput, "reps must be >= 1");
  std::vector<NuEstimate> out;
  for (long long n : n_list) {
    CylinderSpec spec = family.at(n);
    LatticeGraph graph;
    try {
      graph = build_cylinder(spec);
    } catch (const Error& e) {
      if (e.kind() != Err::EmptyGraph) throw;
      if (warnings)
        warnings->push_back("skipped n=" + std::to_string(n) +
                            ": degenerate cylinder (no lattice points)");
      continue;
    }
    if (graph.tagged(kTagHalfUpper).empty() ||
        graph.tagged(kTagHalfLower).empty()) {
      if (warnings)
        warnings->push_back("skipped n=" + std::to_string(n) +
                            ": degenerate cylinder (empty half boundary)");
      continue;
    }
    auto samples = rescaled_tau_samples(graph, spec, dist, reps, seed, workers);
    NuEstimate est;
    est.n = n;
    est.h = spec.height;
    est.reps = reps;
    est.dist_id = dist.id();
    est.spec_id = spec.id();
    bool all_equal = true;
    for (double v : samples)
      if (v != samples.front()) {
        all_equal = false;
        break;
      }
    if (all_equal) {
      est.mean = samples.front();
      est.se = 0.0;
    } else {
      double sum = 0.0;
      for (double v : samples) sum += v;
      est.mean = sum / reps;
      double ss = 0.0;
      for (double v : samples) ss += (v - est.mean) * (v - est.mean);
      est.se = std::sqrt(ss / (reps - 1)) / std::sqrt((double)reps);
    }
    out.push_back(est);
  }
  return out;
}

std::pair<double, double> binomial_ci95(long long hits, long long reps) {
  if (reps < 1) throw Error(Err::InvalidInput, "reps must be >= 1");
  if (hits < 0 || hits > reps)
    throw Error(Err::InvalidInput, "hits outside [0, reps]");
  const double alpha = 0.05;
  double lo = hits == 0
                  ? 0.0
                  : inv_inc_beta((double)hits, (double)(reps - hits + 1),
                                 alpha / 2);
  double hi = hits == reps
                  ? 1.0
                  : inv_inc_beta((double)(hits + 1), (double)(reps - hits),
                                 1.0 - alpha / 2);
  return {lo, hi};
}

TailEstimate tail_from_samples(std::span<const double> samples, double lambda,
                               const CylinderSpec& spec) {
  if (lambda <= 0) throw Error(Err::InvalidInput, "lambda must be > 0");
  if (samples.empty()) throw Error(Err::InvalidInput, "no samples");
  TailEstimate est;
  est.n = spec.base.scale;
  est.h = spec.height;
  est.lambda = lambda;
  est.reps = static_cast<long long>(samples.size());
  for (double v : samples)
    if (v >= lambda) ++est.hits;
  est.p_hat = static_cast<double>(est.hits) / est.reps;
  if (est.hits == 0) {
    est.ci_lo = 0.0;
    est.ci_hi = 3.0 / est.reps;  // one-sided bound for an empty tally
    est.neg_log = kInf;
  } else {
    auto [lo, hi] = binomial_ci95(est.hits, est.reps);
    est.ci_lo = lo;
    est.ci_hi = hi;
    est.neg_log = -std::log(est.p_hat);
  }
  const int d = spec.dim();
  const double n = static_cast<double>(spec.base.scale);
  const double h = spec.height.dbl();
  est.speed_surface = std::pow(n, d - 1);
  est.speed_min = est.speed_surface * std::min(n, h);
  est.speed_volume = est.speed_surface * h;
  return est;
}

TailEstimate tail_probability(const LatticeGraph& graph,
                              const CylinderSpec& spec,
                              const DistributionSpec& dist, double lambda,
                              long long reps, uint64_t seed, int workers) {
  auto samples = rescaled_tau_samples(graph, spec, dist, reps, seed, workers);
  return tail_from_samples(samples, lambda, spec);
}

ScalingFit regime_fit(std::span<const TailEstimate> estimates, int dim) {
  std::vector<const TailEstimate*> usable;
  for (const auto& e : estimates)
    if (e.p_hat > 0.0 && e.p_hat < 0.5) usable.push_back(&e);
  ScalingFit fit;
  fit.usable_points = static_cast<int>(usable.size());
  if (usable.size() < 3)
    throw Error(Err::InsufficientData,
                "need at least 3 ladder points with p_hat in (0, 0.5)");

  std::vector<double> xs, ys;
  for (const auto* e : usable) {
    xs.push_back(std::log(static_cast<double>(e->n)));
    ys.push_back(std::log(e->neg_log));
  }
  const size_t k = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0)
    throw Error(Err::InsufficientData, "ladder points share a single scale");
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  for (size_t i = 0; i < k; ++i) {
    double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    fit.rss += r * r;
  }

  // candidate speeds: slope of each candidate's log against log n, and the
  // fixed-slope (intercept-only) residual against the data
  struct Candidate {
    const char* name;
    double slope;
    double rss;
  };
  auto candidate = [&](const char* name, auto speed_of) {
    std::vector<double> cs;
    for (const auto* e : usable) cs.push_back(std::log(speed_of(*e)));
    double mc = 0;
    for (double c : cs) mc += c;
    mc /= k;
    double scc = 0, scx = 0;
    for (size_t i = 0; i < k; ++i) {
      scc += (cs[i] - mc) * (xs[i] - mx);
      scx += (xs[i] - mx) * (xs[i] - mx);
    }
    double slope = scc / scx;
    double shift = my - mc;  // best intercept with slope fixed at 1
    double rss = 0;
    for (size_t i = 0; i < k; ++i) {
      double r = ys[i] - (cs[i] + shift);
      rss += r * r;
    }
    return Candidate{name, slope, rss};
  };
  std::vector<Candidate> cands;
  cands.push_back(
      candidate("surface", [](const TailEstimate& e) { return e.speed_surface; }));
  cands.push_back(
      candidate("min-regime", [](const TailEstimate& e) { return e.speed_min; }));
  cands.push_back(
      candidate("volume", [](const TailEstimate& e) { return e.speed_volume; }));
  (void)dim;

  const Candidate* best = &cands[0];
  for (const auto& c : cands)
    if (c.rss < best->rss) best = &c;
  fit.best_speed = best->name;

  const double tol = 0.4;
  double best_gap = kInf;
  std::string cls = "inconclusive";
  for (const auto& c : cands) {
    double gap = std::fabs(fit.exponent - c.slope);
    if (gap <= tol && gap < best_gap - 1e-12) {
      best_gap = gap;
      cls = c.name;
    }
  }
  fit.classification = cls;
  return fit;
}

LambdaCalibration calibrate_lambda(
    const std::vector<std::vector<double>>& ladder_samples,
    double delta_factor_default) {
  if (ladder_samples.empty())
    throw Error(Err::InvalidInput, "no ladder samples");
  LambdaCalibration cal;
  const auto& top = ladder_samples.back();
  if (top.empty()) throw Error(Err::InvalidInput, "empty sample set");
  double sum = 0.0;
  for (double v : top) sum += v;
  cal.nu_hat = sum / top.size();

  auto in_range_count = [&](double lambda) {
    int ok = 0;
    for (const auto& set : ladder_samples) {
      long long hits = 0;
      for (double v : set)
        if (v >= lambda) ++hits;
      double p = static_cast<double>(hits) / set.size();
      if (p > 1e-4 && p < 0.5) ++ok;
    }
    return ok;
  };

  const int want = static_cast<int>(ladder_samples.size());
  cal.delta_factor = delta_factor_default;
  cal.lambda = cal.nu_hat * (1.0 + cal.delta_factor);
  cal.points_in_range = in_range_count(cal.lambda);
  if (cal.points_in_range == want) return cal;

  // re-search the factor grid, preferring the smallest departure from the
  // requested default
  std::vector<double> grid = {0.1, 0.15, 0.2, 0.25, 0.3,
                              0.4, 0.5,  0.7, 1.0,  1.5};
  std::sort(grid.begin(), grid.end(), [&](double a, double b) {
    return std::fabs(a - delta_factor_default) <
           std::fabs(b - delta_factor_default);
  });
  int best_ok = cal.points_in_range;
  for (double f : grid) {
    double lambda = cal.nu_hat * (1.0 + f);
    int ok = in_range_count(lambda);
    if (ok > best_ok) {
      best_ok = ok;
      cal.delta_factor = f;
      cal.lambda = lambda;
      cal.recalibrated = true;
      cal.points_in_range = ok;
      if (ok == want) break;
    }
  }
  return cal;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string derive_run_id(const std::string& config_text, uint64_t seed) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "run-%016llx", (unsigned long long)h);
  return buf;
}

RunWriter::RunWriter(std::string out_dir, std::string run_id,
                     std::string spec_id, std::string dist_id, uint64_t seed)
    : out_dir_(std::move(out_dir)),
      run_id_(std::move(run_id)),
      spec_id_(std::move(spec_id)),
      dist_id_(std::move(dist_id)),
      seed_(seed) {}

std::string RunWriter::dir() const { return out_dir_ + "/" + run_id_; }

void RunWriter::add_row(const ResultRow& row) { rows_.push_back(row); }

void RunWriter::set_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void RunWriter::add_plot_point(const std::string& figure, double x, double y) {
  plot_.push_back({figure, {x, y}});
}

void RunWriter::flush() {
  namespace fs = std::filesystem;
  fs::create_directories(dir());
  {
    std::ofstream csv(dir() + "/results.csv", std::ios::trunc);
    csv << "run_id,spec,dist,n,h,reps,seed,statistic,value,ci_lo,ci_hi\n";
    for (const auto& r : rows_) {
      csv << run_id_ << ',' << spec_id_ << ',' << dist_id_ << ',' << r.n << ','
          << r.h << ',' << r.reps << ',' << seed_ << ',' << r.statistic << ','
          << format_double(r.value) << ',' << format_double(r.ci_lo) << ','
          << format_double(r.ci_hi) << '\n';
    }
  }
  {
    nlohmann::json j;
    j["run_id"] = run_id_;
    j["spec"] = spec_id_;
    j["dist"] = dist_id_;
    j["seed"] = seed_;
    for (const auto& [k, v] : meta_) j["meta"][k] = v;
    std::ofstream meta(dir() + "/meta.json", std::ios::trunc);
    meta << j.dump(2) << "\n";
  }
  // plot data: two-column TSV per figure
  std::vector<std::string> figures;
  for (const auto& [fig, xy] : plot_)
    if (std::find(figures.begin(), figures.end(), fig) == figures.end())
      figures.push_back(fig);
  for (const auto& fig : figures) {
    std::ofstream tsv(dir() + "/" + fig + ".tsv", std::ios::trunc);
    for (const auto& [f, xy] : plot_)
      if (f == fig)
        tsv << format_double(xy.first) << '\t' << format_double(xy.second)
            << '\n';
  }
}

}  // namespace fpplab
