#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fpplab/config.hpp"
#include "fpplab/errors.hpp"

using namespace fpplab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "fpplab_cli_test";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  fs::path out = scratch_dir() / "cli_output.txt";
  std::string cmd = std::string(FPPLAB_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, ss.str()};
}

std::string write_config(const std::string& name, const std::string& body) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p, std::ios::trunc);
  out << body;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  RunConfig cfg = RunConfig::parse_text(
      "# comment\n"
      "dim = 2\n"
      "n_list = 4 6 8\n"
      "reps = 10\n"
      "dist = bernoulli:0.7  # trailing comment\n");
  CHECK(cfg.get_int("dim") == 2);
  CHECK(cfg.get_int_list("n_list") == std::vector<long long>{4, 6, 8});
  CHECK(cfg.dist().id() == "bernoulli:0.7");
  CHECK(cfg.get_or("missing", "x") == "x");
  CHECK_THROWS_AS(cfg.get("missing"), Error);
  CHECK_THROWS_AS(RunConfig::parse_text("novalue\n"), Error);
  CHECK_THROWS_AS(RunConfig::parse_text("a = 1\na = 2\n"), Error);
}

TEST_CASE("config allowlist") {
  RunConfig cfg = RunConfig::parse_text("dim = 2\nbogus = 1\n");
  try {
    cfg.validate({"dim"}, {"dim"});
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == Err::Config);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  RunConfig cfg2 = RunConfig::parse_text("dim = 2\n");
  try {
    cfg2.validate({"dim", "reps"}, {"dim", "reps"});
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("reps") != std::string::npos);
  }
}

TEST_CASE("seed precedence: environment over config") {
  RunConfig cfg = RunConfig::parse_text("seed = 5\n");
  unsetenv("FPPLAB_SEED");
  CHECK(cfg.seed() == 5);
  setenv("FPPLAB_SEED", "9", 1);
  CHECK(cfg.seed() == 9);
  unsetenv("FPPLAB_SEED");
}

TEST_CASE("spec family from config defaults") {
  RunConfig cfg = RunConfig::parse_text("dim = 2\n");
  SpecFamily fam = cfg.spec_family();
  CHECK(fam.normal.v == std::vector<long long>{0, 1});
  CylinderSpec spec = fam.at(4);
  CHECK(spec.height == Rat(4));
}

TEST_CASE("estimate-nu runs and reruns byte identically") {
  fs::path outdir = scratch_dir() / "nu_runs";
  fs::remove_all(outdir);
  std::string cfg = write_config("nu.cfg",
                                 "dim = 2\n"
                                 "n_list = 4 6\n"
                                 "reps = 20\n"
                                 "dist = exponential:1\n"
                                 "seed = 11\n"
                                 "out_dir = " + outdir.string() + "\n"
                                 "run_id = nu-test\n");
  RunResult first = run_cli("estimate-nu --config " + cfg);
  CHECK(first.exit_code == 0);
  fs::path csv = outdir / "nu-test" / "results.csv";
  REQUIRE(fs::exists(csv));
  std::string bytes = slurp(csv);
  CHECK(bytes.find("nu_mean") != std::string::npos);
  RunResult second = run_cli("estimate-nu --config " + cfg);
  CHECK(second.exit_code == 0);
  CHECK(slurp(csv) == bytes);
}

TEST_CASE("missing required key exits with the config code") {
  std::string cfg = write_config("missing.cfg", "dim = 2\nreps = 5\n");
  RunResult res = run_cli("estimate-nu --config " + cfg);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("n_list") != std::string::npos);
}

TEST_CASE("unknown key exits with the config code") {
  std::string cfg = write_config(
      "unknown.cfg", "dim = 2\nn_list = 4\nreps = 5\nwat = 7\n");
  RunResult res = run_cli("estimate-nu --config " + cfg);
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("wat") != std::string::npos);
}

TEST_CASE("tail-scan writes one row pair per ladder point") {
  fs::path outdir = scratch_dir() / "tail_runs";
  fs::remove_all(outdir);
  std::string cfg = write_config("tail.cfg",
                                 "dim = 2\n"
                                 "n_list = 4 5 6\n"
                                 "reps = 40\n"
                                 "dist = exponential:1\n"
                                 "out_dir = " + outdir.string() + "\n"
                                 "run_id = tail-test\n");
  RunResult res = run_cli("tail-scan --config " + cfg);
  CHECK(res.exit_code == 0);
  std::string csv = slurp(outdir / "tail-test" / "results.csv");
  int rows = 0;
  for (size_t pos = 0; (pos = csv.find("p_hat", pos)) != std::string::npos;
       ++pos)
    ++rows;
  CHECK(rows == 3);
  std::string meta = slurp(outdir / "tail-test" / "meta.json");
  CHECK(meta.find("lambda") != std::string::npos);
}

TEST_CASE("tail-scan rejects zero reps") {
  std::string cfg = write_config(
      "zeroreps.cfg", "dim = 2\nn_list = 4\nreps = 0\ndist = exponential:1\n");
  RunResult res = run_cli("tail-scan --config " + cfg);
  CHECK(res.exit_code == 2);
}

TEST_CASE("regime-fit echoes a synthetic exponent") {
  fs::path pts = scratch_dir() / "points.txt";
  {
    std::ofstream out(pts, std::ios::trunc);
    out << "4 " << std::exp(-16.0) << "\n";
    out << "8 " << std::exp(-64.0) << "\n";
    out << "12 " << std::exp(-144.0) << "\n";
  }
  fs::path outdir = scratch_dir() / "fit_runs";
  fs::remove_all(outdir);
  std::string cfg = write_config("fit.cfg",
                                 "dim = 2\n"
                                 "points_file = " + pts.string() + "\n"
                                 "out_dir = " + outdir.string() + "\n"
                                 "run_id = fit-test\n");
  RunResult res = run_cli("regime-fit --config " + cfg);
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("e_fit=2") != std::string::npos);

  SUBCASE("too few points fails as a computation error") {
    fs::path pts2 = scratch_dir() / "points2.txt";
    {
      std::ofstream out(pts2, std::ios::trunc);
      out << "4 " << std::exp(-16.0) << "\n";
    }
    std::string cfg2 = write_config("fit2.cfg",
                                    "dim = 2\n"
                                    "points_file = " + pts2.string() + "\n"
                                    "out_dir = " + outdir.string() + "\n");
    RunResult res2 = run_cli("regime-fit --config " + cfg2);
    CHECK(res2.exit_code == 3);
  }
}

TEST_CASE("dump-instance writes a dimacs file") {
  fs::path file = scratch_dir() / "instance.dimacs";
  fs::remove(file);
  std::string cfg = write_config("dump.cfg",
                                 "dim = 2\n"
                                 "n = 4\n"
                                 "dist = bernoulli:0.5\n"
                                 "quantize_scale = 1\n"
                                 "terminals = tau\n"
                                 "out_file = " + file.string() + "\n");
  RunResult res = run_cli("dump-instance --config " + cfg);
  CHECK(res.exit_code == 0);
  std::string text = slurp(file);
  CHECK(text.substr(0, 1) == "c");
  CHECK(text.find("p max ") != std::string::npos);
  CHECK(text.find("n ") != std::string::npos);
}

TEST_CASE("verify runs offline") {
  RunResult res = run_cli("verify");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("[PASS] oracle-equivalence") != std::string::npos);
  CHECK(res.output.find("[FAIL]") == std::string::npos);
}

TEST_CASE("verify surfaces an injected violation by name") {
  std::string cfg =
      write_config("inject.cfg", "inject = capacity_violation\n");
  RunResult res = run_cli("verify --config " + cfg);
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("[FAIL] stream-feasibility") != std::string::npos);
  CHECK(res.output.find("capacity exceeded") != std::string::npos);
}
