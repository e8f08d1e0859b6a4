#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpplab/distributions.hpp"
#include "fpplab/geometry.hpp"
#include "fpplab/lattice_graph.hpp"

namespace fpplab {

// Runs fn(i) for i in [0, count) across the given number of workers.
// Work is partitioned by index, so results are identical for any worker
// count provided fn writes only to slot i of shared output.
void parallel_for(long long count, int workers,
                  const std::function<void(long long)>& fn);

// One flow sample per replication, rescaled by the basis area. These are
// cached by callers so several thresholds reuse the same solves.
std::vector<double> rescaled_tau_samples(const LatticeGraph& graph,
                                         const CylinderSpec& spec,
                                         const DistributionSpec& dist,
                                         long long reps, uint64_t seed,
                                         int workers);

struct NuEstimate {
  long long n = 0;
  Rat h;
  long long reps = 0;
  double mean = 0.0;
  double se = 0.0;
  std::string dist_id;
  std::string spec_id;
};

// Mean and standard error of tau / area over independent replications, for
// each scale in n_list. Scales whose cylinder has an empty half boundary
// are skipped with a warning record.
std::vector<NuEstimate> estimate_nu(const SpecFamily& family,
                                    const DistributionSpec& dist,
                                    std::span<const long long> n_list,
                                    long long reps, uint64_t seed, int workers,
                                    std::vector<std::string>* warnings);

struct TailEstimate {
  long long n = 0;
  Rat h;
  double lambda = 0.0;
  long long reps = 0;
  long long hits = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double neg_log = 0.0;  // -log(p_hat); +inf when no hits
  // candidate decay speeds evaluated at this scale
  double speed_surface = 0.0;  // n^(d-1)
  double speed_min = 0.0;      // n^(d-1) * min(n, h(n))
  double speed_volume = 0.0;   // n^(d-1) * h(n)
};

// Exact (Clopper-Pearson) 95% binomial interval.
std::pair<double, double> binomial_ci95(long long hits, long long reps);

// Tail frequency from cached rescaled flow samples. Zero hits report
// p_hat = 0 with the one-sided upper bound 3/reps.
TailEstimate tail_from_samples(std::span<const double> samples, double lambda,
                               const CylinderSpec& spec);

TailEstimate tail_probability(const LatticeGraph& graph,
                              const CylinderSpec& spec,
                              const DistributionSpec& dist, double lambda,
                              long long reps, uint64_t seed, int workers);

struct ScalingFit {
  double exponent = 0.0;   // slope of log(-log p) against log n
  double intercept = 0.0;
  double rss = 0.0;        // residual sum of squares of the free fit
  int usable_points = 0;
  std::string classification;  // surface | min-regime | volume | inconclusive
  std::string best_speed;      // candidate with the smallest fixed-slope rss
};

// Least-squares fit of log(-log p_hat) against log n over the ladder.
// Points with p_hat outside (0, 0.5) are dropped; fewer than three usable
// points is an error.
ScalingFit regime_fit(std::span<const TailEstimate> estimates, int dim);

// Threshold choice lambda = nu_hat + delta_factor * nu_hat, where nu_hat is
// the sample mean at the largest ladder scale. When some ladder point's
// frequency leaves (1e-4, 0.5), the factor is re-searched over a fixed grid
// and the change is recorded.
struct LambdaCalibration {
  double lambda = 0.0;
  double nu_hat = 0.0;
  double delta_factor = 0.0;
  bool recalibrated = false;
  int points_in_range = 0;
};
LambdaCalibration calibrate_lambda(
    const std::vector<std::vector<double>>& ladder_samples,
    double delta_factor_default);

// ---------------------------------------------------------------------------
// Persistence: one directory per run, a CSV of rows in a fixed column order
// and a JSON sidecar with the full configuration. No timestamps, so a rerun
// with the same inputs is byte-identical.

struct ResultRow {
  std::string statistic;
  long long n = 0;
  std::string h;
  long long reps = 0;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

class RunWriter {
 public:
  RunWriter(std::string out_dir, std::string run_id, std::string spec_id,
            std::string dist_id, uint64_t seed);

  void add_row(const ResultRow& row);
  void set_meta(const std::string& key, const std::string& value);
  void add_plot_point(const std::string& figure, double x, double y);

  // Writes results.csv, meta.json and any plot TSVs under dir()/; creates
  // the directory. Idempotent.
  void flush();

  std::string dir() const;

 private:
  std::string out_dir_, run_id_, spec_id_, dist_id_;
  uint64_t seed_;
  std::vector<ResultRow> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::pair<std::string, std::pair<double, double>>> plot_;
};

// Deterministic id derived from the configuration text and seed.
std::string derive_run_id(const std::string& config_text, uint64_t seed);

std::string format_double(double v);

}  // namespace fpplab
