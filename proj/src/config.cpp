#include "fpplab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::Config, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Err::Config, "line " + std::to_string(lineno) +
                                   ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error(Err::Config, "line " + std::to_string(lineno) + ": empty key");
    if (cfg.kv_.count(key))
      throw Error(Err::Config, "duplicate key '" + key + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

void RunConfig::validate(const std::set<std::string>& allowed,
                         const std::set<std::string>& required) const {
  for (const auto& [k, v] : kv_)
    if (!allowed.count(k))
      throw Error(Err::Config, "unknown key '" + k + "'");
  for (const auto& k : required)
    if (!kv_.count(k))
      throw Error(Err::Config, "missing required key '" + k + "'");
}

std::string RunConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw Error(Err::Config, "missing required key '" + key + "'");
  return it->second;
}

std::string RunConfig::get_or(const std::string& key,
                              const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

long long RunConfig::get_int(const std::string& key) const {
  try {
    return std::stoll(get(key));
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error(Err::Config, "key '" + key + "' is not an integer");
  }
}

long long RunConfig::get_int_or(const std::string& key, long long dflt) const {
  return has(key) ? get_int(key) : dflt;
}

double RunConfig::get_double(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error(Err::Config, "key '" + key + "' is not a number");
  }
}

double RunConfig::get_double_or(const std::string& key, double dflt) const {
  return has(key) ? get_double(key) : dflt;
}

std::vector<long long> RunConfig::get_int_list(const std::string& key) const {
  std::istringstream is(get(key));
  std::vector<long long> out;
  long long v;
  while (is >> v) out.push_back(v);
  if (out.empty())
    throw Error(Err::Config, "key '" + key + "' holds no integers");
  return out;
}

uint64_t RunConfig::seed() const {
  if (const char* env = std::getenv("FPPLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw Error(Err::Config, "FPPLAB_SEED is not an integer");
    }
  }
  return static_cast<uint64_t>(get_int_or("seed", 0));
}

CylinderSpec RunConfig::spec_at_n(long long n) const {
  return spec_family().at(n);
}

SpecFamily RunConfig::spec_family() const {
  std::map<std::string, std::string> kv;
  for (const auto& k :
       {"dim", "normal", "anchor", "lengths", "height_rule", "height_param"})
    if (has(k)) kv[k] = get(k);
  for (int i = 1; i <= 9; ++i) {
    std::string key = "frame_" + std::to_string(i);
    if (has(key)) kv[key] = get(key);
  }
  if (!kv.count("dim")) throw Error(Err::Config, "missing required key 'dim'");
  if (!kv.count("normal")) {
    // default straight orientation
    long long d = std::stoll(kv["dim"]);
    std::string norm;
    for (long long i = 0; i < d; ++i) norm += (i + 1 == d ? "1" : "0 ");
    kv["normal"] = norm;
  }
  if (!kv.count("lengths")) kv["lengths"] = "1";
  if (!kv.count("height_rule")) kv["height_rule"] = "linear";
  if (!kv.count("height_param")) kv["height_param"] = "1";
  kv["n"] = "1";
  CylinderSpec probe;
  try {
    probe = CylinderSpec::from_kv(kv);
  } catch (const Error& e) {
    throw Error(Err::Config, e.what());
  }
  SpecFamily fam;
  fam.base = probe.base;
  fam.normal = probe.normal;
  fam.height_fn = probe.height_fn;
  return fam;
}

DistributionSpec RunConfig::dist() const {
  try {
    return DistributionSpec::parse(get_or("dist", "exponential:1"));
  } catch (const Error& e) {
    throw Error(Err::Config, e.what());
  }
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys = {"seed", "workers", "out_dir",
                                             "run_id"};
  return keys;
}

const std::set<std::string>& spec_keys() {
  static const std::set<std::string> keys = {
      "dim",     "normal",  "anchor",  "lengths", "height_rule",
      "height_param", "frame_1", "frame_2", "frame_3", "frame_4",
      "frame_5", "frame_6", "frame_7", "frame_8", "frame_9"};
  return keys;
}

}  // namespace fpplab
