#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fpplab/distributions.hpp"
#include "fpplab/geometry.hpp"

namespace fpplab {

// Flat "key = value" configuration, one pair per line, '#' comments.
// Every key is validated against the command's allowlist before any
// computation runs; unknown keys are rejected.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);

  // Throws config errors for unknown keys or missing required ones.
  void validate(const std::set<std::string>& allowed,
                const std::set<std::string>& required) const;

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& dflt) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long dflt) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double dflt) const;
  std::vector<long long> get_int_list(const std::string& key) const;

  // Seed resolution: the FPPLAB_SEED environment variable wins over the
  // config value; default 0.
  uint64_t seed() const;

  CylinderSpec spec_at_n(long long n) const;
  SpecFamily spec_family() const;
  DistributionSpec dist() const;

  const std::string& text() const { return text_; }

 private:
  std::map<std::string, std::string> kv_;
  std::string text_;
};

// Keys shared by every command.
const std::set<std::string>& common_keys();
// Keys describing the cylinder family.
const std::set<std::string>& spec_keys();

}  // namespace fpplab
