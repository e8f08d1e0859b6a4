#pragma once

#include <stdexcept>
#include <string>

namespace fpplab {

enum class Err {
  InvalidSpec,
  EmptyGraph,
  DegenerateCylinder,
  InvalidDistribution,
  InvalidInput,
  OracleSize,
  DecompositionInfeasible,
  TooSmallCylinder,
  InsufficientData,
  Consistency,
  Config,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidSpec: return "invalid-spec";
    case Err::EmptyGraph: return "empty-graph";
    case Err::DegenerateCylinder: return "degenerate-cylinder";
    case Err::InvalidDistribution: return "invalid-distribution";
    case Err::InvalidInput: return "invalid-input";
    case Err::OracleSize: return "oracle-size";
    case Err::DecompositionInfeasible: return "decomposition-infeasible";
    case Err::TooSmallCylinder: return "too-small-cylinder";
    case Err::InsufficientData: return "insufficient-data";
    case Err::Consistency: return "consistency";
    case Err::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& what)
      : std::runtime_error(std::string(err_name(kind)) + ": " + what),
        kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

}  // namespace fpplab
