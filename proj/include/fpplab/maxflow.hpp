#pragma once

#include <span>
#include <string>
#include <vector>

#include "fpplab/lattice_graph.hpp"
#include "fpplab/sampling.hpp"

namespace fpplab {

// Feasible stream: per-edge throughput g >= 0 and, where g > 0, the
// direction the fluid takes. orient is +1 when the fluid runs from the
// stored lower endpoint to the higher one, -1 the other way, 0 when idle.
// Exit legs carry the absorbed flux from a sink vertex to one of its
// lattice neighbours outside the region.
struct Stream {
  std::vector<double> g;
  std::vector<int8_t> orient;
  struct Exit {
    int vertex;
    std::vector<long long> outside;
    double g;
  };
  std::vector<Exit> exits;
};

struct FlowResult {
  double value = 0.0;
  long long value_int = 0;   // populated in integer mode
  bool exact = false;        // true when solved on integer capacities
  Stream stream;
  std::vector<int> cut_edges;        // canonical edge ids
  std::vector<uint8_t> source_side;  // per vertex, 1 on the source side
};

// Maximum flow between vertex sets, multi-terminal via a virtual
// source/sink. The returned cut is induced by the residual-reachable set on
// the source side. Float mode is accurate to ~1e-9 relative; the integer
// overload is exact.
FlowResult max_flow(const LatticeGraph& graph, std::span<const double> caps,
                    std::span<const int> sources, std::span<const int> sinks);
FlowResult max_flow(const LatticeGraph& graph, std::span<const long long> caps,
                    std::span<const int> sources, std::span<const int> sinks);

// Flow from the upper half boundary to the lower one (both must be
// nonempty, i.e. the cylinder must be tall enough).
FlowResult tau_flow(const LatticeGraph& graph, const CylinderSpec& spec,
                    const CapacityAssignment& caps);
// Flow from the bottom vertex set to the top one.
FlowResult phi_flow(const LatticeGraph& graph, const CylinderSpec& spec,
                    const CapacityAssignment& caps);

FlowResult tau_flow(const CylinderSpec& spec, const CapacityAssignment& caps);
FlowResult phi_flow(const CylinderSpec& spec, const CapacityAssignment& caps);

struct StreamViolation {
  enum Kind { CapacityExceeded, NegativeThroughput, Conservation } kind;
  int edge = -1;    // capacity violations
  int vertex = -1;  // conservation violations
  double amount = 0.0;
  std::string describe(const LatticeGraph& graph) const;
};

// Checks 0 <= g(e) <= t(e) on every edge and flux balance at every vertex
// outside sources and sinks. Empty result means the stream is feasible.
std::vector<StreamViolation> validate_stream(const LatticeGraph& graph,
                                             std::span<const double> caps,
                                             std::span<const int> sources,
                                             std::span<const int> sinks,
                                             const Stream& stream,
                                             double tol = 1e-9);

// Net flux leaving the region through sink vertices: the signed sum of
// exit-leg throughputs over edges (u, v) with u in the sink set and v
// outside the region.
double flow_value(const Stream& stream, const LatticeGraph& graph,
                  std::span<const int> sinks, const CylinderSpec& region);

// Exhaustive minimum cut over all edge subsets; graphs of at most 16 edges.
double min_cut_bruteforce(const LatticeGraph& graph,
                          std::span<const double> caps,
                          std::span<const int> sources,
                          std::span<const int> sinks);
long long min_cut_bruteforce(const LatticeGraph& graph,
                             std::span<const long long> caps,
                             std::span<const int> sources,
                             std::span<const int> sinks);

// DIMACS max-flow text format, with the virtual terminals materialized.
void write_dimacs(std::ostream& os, const LatticeGraph& graph,
                  std::span<const long long> caps,
                  std::span<const int> sources, std::span<const int> sinks);

}  // namespace fpplab
