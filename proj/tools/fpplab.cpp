// Batch driver: wires flat key/value configs to the estimators and the
// verification suite, and writes CSV/TSV/JSON results per run.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "fpplab/config.hpp"
#include "fpplab/crossing.hpp"
#include "fpplab/decomposition.hpp"
#include "fpplab/errors.hpp"
#include "fpplab/experiments.hpp"
#include "fpplab/maxflow.hpp"
#include "fpplab/verify.hpp"

namespace fpplab {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;

std::set<std::string> merge_keys(std::initializer_list<std::string> extra,
                                 bool with_spec = true,
                                 bool with_dist = true) {
  std::set<std::string> keys = common_keys();
  if (with_spec)
    for (const auto& k : spec_keys()) keys.insert(k);
  if (with_dist) keys.insert("dist");
  for (const auto& k : extra) keys.insert(k);
  return keys;
}

int g_workers_override = 0;  // set by the --workers flag

int workers_of(const RunConfig& cfg) {
  long long w = g_workers_override > 0 ? g_workers_override
                                       : cfg.get_int_or("workers", 1);
  if (w < 1) throw Error(Err::Config, "workers must be >= 1");
  return static_cast<int>(w);
}

RunWriter make_writer(const RunConfig& cfg, const CylinderSpec& spec,
                      const DistributionSpec& dist) {
  std::string out_dir = cfg.get_or("out_dir", "runs");
  std::string run_id = cfg.get_or("run_id", derive_run_id(cfg.text(), cfg.seed()));
  return RunWriter(out_dir, run_id, spec.id(), dist.id(), cfg.seed());
}

int cmd_estimate_nu(const RunConfig& cfg) {
  cfg.validate(merge_keys({"n_list", "reps"}), {"dim", "n_list", "reps"});
  SpecFamily fam = cfg.spec_family();
  DistributionSpec dist = cfg.dist();
  auto n_list = cfg.get_int_list("n_list");
  long long reps = cfg.get_int("reps");
  std::vector<std::string> warnings;
  auto estimates = estimate_nu(fam, dist, n_list, reps, cfg.seed(),
                               workers_of(cfg), &warnings);
  RunWriter writer = make_writer(cfg, fam.at(n_list.front()), dist);
  for (const auto& est : estimates) {
    ResultRow row;
    row.statistic = "nu_mean";
    row.n = est.n;
    row.h = est.h.str();
    row.reps = est.reps;
    row.value = est.mean;
    row.ci_lo = est.mean - 1.96 * est.se;
    row.ci_hi = est.mean + 1.96 * est.se;
    writer.add_row(row);
    row.statistic = "nu_se";
    row.value = est.se;
    row.ci_lo = row.ci_hi = est.se;
    writer.add_row(row);
    writer.add_plot_point("nu_vs_n", static_cast<double>(est.n), est.mean);
    std::printf("n=%lld  mean=%.10g  se=%.3g\n", est.n, est.mean, est.se);
  }
  for (size_t i = 0; i < warnings.size(); ++i)
    writer.set_meta("warning_" + std::to_string(i), warnings[i]);
  writer.set_meta("command", "estimate-nu");
  writer.flush();
  std::printf("results in %s\n", writer.dir().c_str());
  return kExitOk;
}

struct LadderScan {
  std::vector<CylinderSpec> specs;
  std::vector<std::vector<double>> samples;
  LambdaCalibration cal;
  double lambda = 0.0;
  bool lambda_fixed = false;
};

LadderScan run_ladder(const RunConfig& cfg) {
  SpecFamily fam = cfg.spec_family();
  DistributionSpec dist = cfg.dist();
  auto n_list = cfg.get_int_list("n_list");
  long long reps = cfg.get_int("reps");
  if (reps < 1) throw Error(Err::Config, "reps must be >= 1");
  LadderScan scan;
  for (long long n : n_list) {
    CylinderSpec spec = fam.at(n);
    LatticeGraph graph = build_cylinder(spec);
    scan.specs.push_back(spec);
    scan.samples.push_back(rescaled_tau_samples(graph, spec, dist, reps,
                                                cfg.seed(), workers_of(cfg)));
  }
  if (cfg.has("lambda")) {
    scan.lambda = cfg.get_double("lambda");
    if (scan.lambda <= 0) throw Error(Err::Config, "lambda must be > 0");
    scan.lambda_fixed = true;
  } else {
    scan.cal =
        calibrate_lambda(scan.samples, cfg.get_double_or("lambda_delta", 0.3));
    scan.lambda = scan.cal.lambda;
  }
  return scan;
}

void record_scan(RunWriter& writer, const LadderScan& scan,
                 std::vector<TailEstimate>& estimates) {
  for (size_t i = 0; i < scan.specs.size(); ++i) {
    TailEstimate est =
        tail_from_samples(scan.samples[i], scan.lambda, scan.specs[i]);
    ResultRow row;
    row.statistic = "p_hat";
    row.n = est.n;
    row.h = est.h.str();
    row.reps = est.reps;
    row.value = est.p_hat;
    row.ci_lo = est.ci_lo;
    row.ci_hi = est.ci_hi;
    writer.add_row(row);
    row.statistic = "neg_log_p";
    row.value = est.neg_log;
    row.ci_lo = est.ci_hi > 0 ? -std::log(est.ci_hi) : est.neg_log;
    row.ci_hi = est.ci_lo > 0 ? -std::log(est.ci_lo) : est.neg_log;
    writer.add_row(row);
    if (est.p_hat > 0 && est.p_hat < 1)
      writer.add_plot_point("tail_scan", std::log((double)est.n),
                            std::log(est.neg_log));
    estimates.push_back(est);
    std::printf("n=%lld  p_hat=%.6g  [%.6g, %.6g]\n", est.n, est.p_hat,
                est.ci_lo, est.ci_hi);
  }
  writer.set_meta("lambda", format_double(scan.lambda));
  if (!scan.lambda_fixed) {
    writer.set_meta("nu_hat", format_double(scan.cal.nu_hat));
    writer.set_meta("lambda_delta_factor",
                    format_double(scan.cal.delta_factor));
    writer.set_meta("lambda_recalibrated",
                    scan.cal.recalibrated ? "true" : "false");
  }
}

int cmd_tail_scan(const RunConfig& cfg) {
  cfg.validate(merge_keys({"n_list", "reps", "lambda", "lambda_delta"}),
               {"dim", "n_list", "reps"});
  LadderScan scan = run_ladder(cfg);
  RunWriter writer = make_writer(cfg, scan.specs.front(), cfg.dist());
  std::vector<TailEstimate> estimates;
  record_scan(writer, scan, estimates);
  writer.set_meta("command", "tail-scan");
  writer.flush();
  std::printf("results in %s\n", writer.dir().c_str());
  return kExitOk;
}

int cmd_regime_fit(const RunConfig& cfg) {
  cfg.validate(
      merge_keys({"n_list", "reps", "lambda", "lambda_delta", "points_file"}),
      {"dim"});
  SpecFamily fam = cfg.spec_family();
  std::vector<TailEstimate> estimates;
  RunWriter writer = make_writer(
      cfg, fam.at(cfg.has("n_list") ? cfg.get_int_list("n_list").front() : 2),
      cfg.dist());
  if (cfg.has("points_file")) {
    std::ifstream in(cfg.get("points_file"));
    if (!in) throw Error(Err::Config, "cannot open points_file");
    long long n;
    double p;
    while (in >> n >> p) {
      CylinderSpec spec = fam.at(n);
      std::vector<double> fake{p};
      TailEstimate est;
      est.n = n;
      est.h = spec.height;
      est.reps = 1;
      est.p_hat = p;
      est.hits = p > 0 ? 1 : 0;
      est.neg_log = p > 0 ? -std::log(p)
                          : std::numeric_limits<double>::infinity();
      const int d = spec.dim();
      est.speed_surface = std::pow((double)n, d - 1);
      est.speed_min = est.speed_surface * std::min((double)n, spec.height.dbl());
      est.speed_volume = est.speed_surface * spec.height.dbl();
      estimates.push_back(est);
    }
    if (estimates.empty())
      throw Error(Err::Config, "points_file holds no points");
  } else {
    if (!cfg.has("n_list") || !cfg.has("reps"))
      throw Error(Err::Config, "missing required key 'n_list'");
    LadderScan scan = run_ladder(cfg);
    record_scan(writer, scan, estimates);
  }
  ScalingFit fit = regime_fit(estimates, static_cast<int>(cfg.get_int("dim")));
  ResultRow row;
  row.statistic = "e_fit";
  row.n = estimates.back().n;
  row.h = estimates.back().h.str();
  row.reps = estimates.back().reps;
  row.value = fit.exponent;
  row.ci_lo = row.ci_hi = fit.exponent;
  writer.add_row(row);
  for (const auto& est : estimates)
    if (est.p_hat > 0 && est.p_hat < 1)
      writer.add_plot_point("regime_fit", std::log((double)est.n),
                            std::log(est.neg_log));
  writer.set_meta("command", "regime-fit");
  writer.set_meta("classification", fit.classification);
  writer.set_meta("best_speed", fit.best_speed);
  writer.set_meta("rss", format_double(fit.rss));
  writer.flush();
  std::printf("e_fit=%.6g  classification=%s  best_speed=%s\n", fit.exponent,
              fit.classification.c_str(), fit.best_speed.c_str());
  std::printf("results in %s\n", writer.dir().c_str());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  std::set<std::string> keys = common_keys();
  keys.insert("inject");
  cfg.validate(keys, {});
  auto results =
      run_verification(cfg.seed(), workers_of(cfg), cfg.get_or("inject", ""));
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.ok ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all_ok = all_ok && r.ok;
  }
  return all_ok ? kExitOk : kExitCompute;
}

int cmd_dump_instance(const RunConfig& cfg) {
  cfg.validate(
      merge_keys({"n", "rep", "terminals", "quantize_scale", "out_file"}),
      {"dim", "n"});
  SpecFamily fam = cfg.spec_family();
  CylinderSpec spec = fam.at(cfg.get_int("n"));
  LatticeGraph graph = build_cylinder(spec);
  DistributionSpec dist = cfg.dist();
  CapacityAssignment caps = sample_capacities(
      graph, dist, cfg.seed(), static_cast<uint64_t>(cfg.get_int_or("rep", 0)));
  auto ints = quantize(caps, cfg.get_int_or("quantize_scale", 1000000));
  std::string terminals = cfg.get_or("terminals", "tau");
  std::vector<int> sources, sinks;
  if (terminals == "tau") {
    sources = graph.tagged(kTagHalfUpper);
    sinks = graph.tagged(kTagHalfLower);
  } else if (terminals == "phi") {
    sources = graph.tagged(kTagBottom);
    sinks = graph.tagged(kTagTop);
  } else {
    throw Error(Err::Config, "terminals must be 'tau' or 'phi'");
  }
  if (sources.empty() || sinks.empty())
    throw Error(Err::DegenerateCylinder, "terminal set is empty");
  std::string path = cfg.get_or("out_file", "instance.dimacs");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Err::Config, "cannot open out_file '" + path + "'");
  write_dimacs(out, graph, ints, sources, sinks);
  std::printf("wrote %s (%d vertices, %d edges)\n", path.c_str(),
              graph.num_vertices(), graph.num_edges());
  return kExitOk;
}

int dispatch(const std::string& name, const std::string& config_path,
             bool config_given) {
  RunConfig cfg;
  try {
    cfg = config_given ? RunConfig::parse_file(config_path)
                       : RunConfig::parse_text("");
    if (name == "estimate-nu") return cmd_estimate_nu(cfg);
    if (name == "tail-scan") return cmd_tail_scan(cfg);
    if (name == "regime-fit") return cmd_regime_fit(cfg);
    if (name == "verify") return cmd_verify(cfg);
    if (name == "dump-instance") return cmd_dump_instance(cfg);
    std::fprintf(stderr, "unknown command %s\n", name.c_str());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == Err::Config || e.kind() == Err::InvalidSpec
               ? kExitConfig
               : kExitCompute;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCompute;
  }
}

}  // namespace
}  // namespace fpplab

int main(int argc, char** argv) {
  CLI::App app{"maximal flow laboratory for lattice cylinders"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool config_required;
  };
  const Sub subs[] = {
      {"estimate-nu", "estimate the rescaled flow constant over a scale list",
       true},
      {"tail-scan", "upper tail frequencies over a scale ladder", true},
      {"regime-fit", "fit the decay exponent of -log p over the ladder", true},
      {"verify", "run the offline verification suite", false},
      {"dump-instance", "write one instance in DIMACS max-flow format", true},
  };
  std::map<std::string, std::string> config_paths;
  for (const auto& sub : subs) {
    CLI::App* s = app.add_subcommand(sub.name, sub.help);
    auto opt = s->add_option("--config,-c", config_paths[sub.name],
                             "flat key = value configuration file");
    if (sub.config_required) opt->required();
    s->add_option("--workers,-j", fpplab::g_workers_override,
                  "worker threads (overrides the config key)");
  }

  CLI11_PARSE(app, argc, argv);
  for (const auto& sub : subs) {
    CLI::App* s = app.get_subcommand(sub.name);
    if (s->parsed())
      return fpplab::dispatch(sub.name, config_paths[sub.name],
                              s->count("--config") > 0);
  }
  return fpplab::kExitConfig;
}
