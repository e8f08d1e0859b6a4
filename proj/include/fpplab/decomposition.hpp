#pragma once

#include <array>
#include <string>
#include <vector>

#include "fpplab/lattice_graph.hpp"
#include "fpplab/maxflow.hpp"

namespace fpplab {

enum class MRule { Max, BoundedRegime, Slow };

MRule m_rule_from_string(const std::string& s);
std::string m_rule_name(MRule r);

// One small box: an integer translate of cyl(nA, h(n)) placed inside its
// slot. `shift` is the integer translation, `u` the correction from the
// real-valued slot position (|u|_inf < 1, chosen with a nonnegative
// component along the normal so the box equator never sits below the slab
// equator).
struct PlacedBox {
  int slab = 0;                        // 1-based slab index
  std::vector<long long> grid;         // slot coordinates inside the slab
  std::vector<long long> shift;
  std::vector<double> u;
};

// Two-scale covering of a large cylinder by integer translates of a small
// one: M horizontal slabs, each tiled with m disjoint slots holding one box,
// plus the glue edge sets that close the gaps between the small cuts.
struct DecompositionPlan {
  long long n = 0, N = 0;
  Rat zeta;
  MRule rule = MRule::Max;
  int M = 0;                       // slab count
  long long m = 0;                 // boxes per slab
  long long capacity_budget = 0;   // floor(area(NA) / area(nA))
  Rat h_small, h_big;
  Rat stack_halfheight;            // M * (h_small + zeta/2)
  std::vector<long long> slot_counts;  // boxes per frame axis

  CylinderSpec small_spec, big_spec;
  LatticeGraph big_graph;
  LatticeGraph box_graph;  // template graph of the small cylinder
  std::vector<PlacedBox> boxes;
  std::vector<std::vector<int>> box_vertex_to_big;  // per box
  std::vector<std::vector<int>> box_edge_to_big;    // per box

  std::vector<int> glue_e1;                // big-graph edge ids
  std::vector<std::vector<int>> glue_e0;   // per slab

  long long card_e1() const { return static_cast<long long>(glue_e1.size()); }
  long long max_card_e0() const;

  const PlacedBox& box(int slab, long long j) const {
    return boxes[(size_t)(slab - 1) * m + j];
  }
  int box_index(int slab, long long j) const {
    return static_cast<int>((slab - 1) * m + j);
  }
};

// Builds the plan for scales n < N with margin parameter zeta >= 2d.
// Throws decomposition-infeasible when a slot or slab does not fit.
DecompositionPlan slab_decomposition(const SpecFamily& family, long long N,
                                     long long n, const Rat& zeta, MRule rule);

struct GluingReport {
  double tau_big = 0.0;
  std::vector<double> sum_small;    // per slab: sum of box flows
  std::vector<double> glue_value;   // per slab: V(E1 union E0_i)
  std::vector<double> slack;        // per slab: rhs - tau_big
  bool inequality_ok = false;
  bool separation_ok = false;
  // top-to-bottom variant: the box cuts plus E0_i alone (no lateral shell)
  // must already cut the top from the bottom
  double phi_big = 0.0;
  std::vector<double> phi_slack;
  bool phi_inequality_ok = false;
  bool phi_separation_ok = false;
  std::string to_json(const DecompositionPlan& plan) const;
};

// Computes both sides of the covering inequality
//   tau(big) <= sum_j tau(box_{i,j}) + V(E1 union E0_i)   for every slab i
// on one sampled capacity field, and checks by graph search that the box
// cuts plus glue edges disconnect the two half boundaries of the big
// cylinder. Also checks the top-to-bottom analogue
//   phi(big) <= sum_j tau(box_{i,j}) + V(E0_i),
// whose separating set needs no lateral shell.
GluingReport verify_cut_gluing(const DecompositionPlan& plan,
                               const CapacityAssignment& caps);

struct CardinalityReport {
  long long N = 0, n = 0;
  long long card_e1 = 0;
  long long max_card_e0 = 0;
  double c0 = 0.0;  // max card(E0_i) / (N^(d-1)/n + N^(d-2) n)
  double c1 = 0.0;  // card(E1) / (N^(d-2) M h(n))
};

CardinalityReport cardinality_bounds(const DecompositionPlan& plan);

// Relative spread of the fitted constants over a ladder of N values:
// (max - min) / mean and the largest consecutive step, for both constants.
struct LadderVariation {
  double c0_range_over_mean = 0.0;
  double c1_range_over_mean = 0.0;
  double c0_max_step = 0.0;
  double c1_max_step = 0.0;
};
LadderVariation ladder_variation(const std::vector<CardinalityReport>& reports);

}  // namespace fpplab
