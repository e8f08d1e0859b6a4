#pragma once

#include <map>
#include <string>
#include <vector>

#include "fpplab/rational.hpp"

namespace fpplab {

// Integer normal direction of the cylinder basis. The unit normal is
// v / |v|; keeping v integral lets every membership test run in exact
// arithmetic (squared forms instead of square roots).
struct Direction {
  std::vector<long long> v;  // nonzero, components coprime

  int dim() const { return static_cast<int>(v.size()); }
  long long norm2() const {
    long long s = 0;
    for (long long c : v) s += c * c;
    return s;
  }
  void validate() const;
};

// A (d-1)-dimensional box living in the hyperplane orthogonal to the normal.
// Frame vectors give the directions of the sides (integral, pairwise
// orthogonal, orthogonal to the normal); side_lengths give the extents
// along the unit frame directions. The box at scale n spans
//   anchor + sum_j s_j * (f_j / |f_j|),  s_j in [0, n * side_lengths[j]].
struct Hyperrectangle {
  std::vector<Rat> anchor;
  std::vector<std::vector<long long>> frame;
  std::vector<Rat> side_lengths;
  long long scale = 1;

  int dim() const { return static_cast<int>(anchor.size()); }
  // (d-1)-dimensional area of the scaled box: scale^(d-1) * prod(lengths).
  Rat area() const;
  void validate(const Direction& normal) const;
};

enum class HeightRule { Const, Sqrt, Linear, Quadratic, Log };

HeightRule height_rule_from_string(const std::string& s);
std::string height_rule_name(HeightRule r);

// h(n) = ceil(c * n^alpha) for alpha in {0, 1/2, 1, 2}, or ceil(c*log(n+1)).
// Values are integers, so downstream geometry stays exact.
struct HeightFunction {
  HeightRule rule = HeightRule::Linear;
  Rat c = Rat(1);

  Rat value(long long n) const;
};

struct CylinderSpec {
  Hyperrectangle base;    // carries the scale n
  Direction normal;
  Rat height;             // half-height h, >= 0
  HeightFunction height_fn;  // rule that produced `height` at base.scale

  int dim() const { return normal.dim(); }
  void validate() const;

  // Compact identifier used in result files.
  std::string id() const;

  // Flat key-value serialization (keys: dim, normal, anchor, frame_i,
  // lengths, n, height_rule, height_param).
  std::map<std::string, std::string> to_kv() const;
  static CylinderSpec from_kv(const std::map<std::string, std::string>& kv);
};

// A spec family generates cylinders cyl(nA, h(n)) over the scale n.
struct SpecFamily {
  Hyperrectangle base;  // scale field ignored; overridden per n
  Direction normal;
  HeightFunction height_fn;

  CylinderSpec at(long long n) const;
};

// Exact membership of an integer point in the closed cylinder.
bool point_in_cylinder(const CylinderSpec& spec,
                       const std::vector<long long>& p);

// An edge belongs to the region when the open segment between its endpoints
// lies in the closed cylinder. The cylinder is convex and closed, so this
// holds exactly when both endpoints are inside.
bool edge_in_region(const std::vector<long long>& x,
                    const std::vector<long long>& y,
                    const CylinderSpec& spec);

// Signed side of the base hyperplane: +1 strictly on the positive-normal
// side, -1 strictly on the other, 0 on the hyperplane.
int hyperplane_side(const CylinderSpec& spec, const std::vector<long long>& p);

// Whether the segment [x, y] meets the translated face  nA + side*h*v_hat
// (side = +1 for the top face, -1 for the bottom). Exact.
bool segment_meets_face(const CylinderSpec& spec,
                        const std::vector<long long>& x,
                        const std::vector<long long>& y, int side);

// Completes an integer normal to a full orthogonal integer frame of its
// orthogonal complement (Gram-Schmidt over the rationals, cleared to
// integers). Deterministic.
std::vector<std::vector<long long>> orthogonal_frame(const Direction& normal);

// Convenience constructor for an axis-aligned ("straight") spec family:
// normal = e_d, base anchored at the origin with the given side lengths.
SpecFamily straight_family(int dim, const std::vector<Rat>& lengths,
                           HeightFunction h);

}  // namespace fpplab
