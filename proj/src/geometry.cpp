#include "fpplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fpplab/errors.hpp"

namespace fpplab {

namespace {

Rat dot_rat(const std::vector<Rat>& a, const std::vector<long long>& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
  return s;
}

long long dot_ll(const std::vector<long long>& a,
                 const std::vector<long long>& b) {
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Rat> point_minus_anchor(const CylinderSpec& spec,
                                    const std::vector<long long>& p) {
  std::vector<Rat> q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[i] = Rat(p[i]) - spec.base.anchor[i];
  return q;
}

std::string join_ll(const std::vector<long long>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i];
  }
  return os.str();
}

std::string join_rat(const std::vector<Rat>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i].str();
  }
  return os.str();
}

std::vector<long long> parse_ll_list(const std::string& s) {
  std::istringstream is(s);
  std::vector<long long> out;
  long long x;
  while (is >> x) out.push_back(x);
  return out;
}

std::vector<Rat> parse_rat_list(const std::string& s) {
  std::istringstream is(s);
  std::vector<Rat> out;
  std::string tok;
  while (is >> tok) out.push_back(Rat::parse(tok));
  return out;
}

}  // namespace

void Direction::validate() const {
  if (v.size() < 2) throw Error(Err::InvalidSpec, "dimension must be >= 2");
  long long g = 0;
  bool nonzero = false;
  for (long long c : v) {
    if (c != 0) nonzero = true;
    g = std::gcd(g, c < 0 ? -c : c);
  }
  if (!nonzero) throw Error(Err::InvalidSpec, "normal direction is zero");
  if (g != 1) throw Error(Err::InvalidSpec, "normal components not coprime");
}

Rat Hyperrectangle::area() const {
  Rat a(1);
  for (const Rat& l : side_lengths) a *= l;
  for (size_t i = 0; i + 1 < anchor.size(); ++i) a *= Rat(scale);
  return a;
}

void Hyperrectangle::validate(const Direction& normal) const {
  int d = normal.dim();
  if (static_cast<int>(anchor.size()) != d)
    throw Error(Err::InvalidSpec, "anchor dimension mismatch");
  if (static_cast<int>(frame.size()) != d - 1)
    throw Error(Err::InvalidSpec, "frame must have d-1 vectors");
  if (static_cast<int>(side_lengths.size()) != d - 1)
    throw Error(Err::InvalidSpec, "side_lengths must have d-1 entries");
  if (scale < 1) throw Error(Err::InvalidSpec, "scale must be >= 1");
  for (const auto& f : frame) {
    if (static_cast<int>(f.size()) != d)
      throw Error(Err::InvalidSpec, "frame vector dimension mismatch");
    long long n2 = dot_ll(f, f);
    if (n2 == 0) throw Error(Err::InvalidSpec, "frame vector is zero");
    if (dot_ll(f, normal.v) != 0)
      throw Error(Err::InvalidSpec, "frame vector not orthogonal to normal");
  }
  for (size_t i = 0; i < frame.size(); ++i)
    for (size_t j = i + 1; j < frame.size(); ++j)
      if (dot_ll(frame[i], frame[j]) != 0)
        throw Error(Err::InvalidSpec, "frame vectors not pairwise orthogonal");
  for (const Rat& l : side_lengths)
    if (l.sign() <= 0)
      throw Error(Err::InvalidSpec, "side length must be positive");
}

HeightRule height_rule_from_string(const std::string& s) {
  if (s == "const") return HeightRule::Const;
  if (s == "sqrt") return HeightRule::Sqrt;
  if (s == "linear") return HeightRule::Linear;
  if (s == "quadratic") return HeightRule::Quadratic;
  if (s == "log") return HeightRule::Log;
  throw Error(Err::InvalidSpec, "unknown height rule '" + s + "'");
}

std::string height_rule_name(HeightRule r) {
  switch (r) {
    case HeightRule::Const: return "const";
    case HeightRule::Sqrt: return "sqrt";
    case HeightRule::Linear: return "linear";
    case HeightRule::Quadratic: return "quadratic";
    case HeightRule::Log: return "log";
  }
  return "?";
}

Rat HeightFunction::value(long long n) const {
  if (n < 1) throw Error(Err::InvalidSpec, "scale must be >= 1");
  if (c.sign() <= 0) throw Error(Err::InvalidSpec, "height c must be > 0");
  switch (rule) {
    case HeightRule::Const:
      return Rat(c.ceil());
    case HeightRule::Linear:
      return Rat((c * Rat(n)).ceil());
    case HeightRule::Quadratic:
      return Rat((c * Rat(n) * Rat(n)).ceil());
    case HeightRule::Sqrt: {
      // smallest k >= c*sqrt(n): k >= 0 and k^2 >= c^2 n, found exactly
      long long guess = static_cast<long long>(
          std::floor(c.dbl() * std::sqrt(static_cast<double>(n)))) - 2;
      if (guess < 0) guess = 0;
      Rat c2n = c * c * Rat(n);
      long long k = guess;
      while (Rat(k) * Rat(k) < c2n) ++k;
      return Rat(k);
    }
    case HeightRule::Log: {
      double v = c.dbl() * std::log(static_cast<double>(n) + 1.0);
      return Rat(static_cast<long long>(std::ceil(v - 1e-12)));
    }
  }
  return Rat(0);
}

void CylinderSpec::validate() const {
  normal.validate();
  base.validate(normal);
  if (height.sign() < 0)
    throw Error(Err::InvalidSpec, "height must be nonnegative");
}

std::string CylinderSpec::id() const {
  std::ostringstream os;
  os << "d" << dim() << ":v";
  for (size_t i = 0; i < normal.v.size(); ++i) {
    if (i) os << ",";
    os << normal.v[i];
  }
  os << ":L";
  for (size_t i = 0; i < base.side_lengths.size(); ++i) {
    if (i) os << ",";
    os << base.side_lengths[i].str();
  }
  os << ":n" << base.scale << ":h" << height.str();
  return os.str();
}

std::map<std::string, std::string> CylinderSpec::to_kv() const {
  std::map<std::string, std::string> kv;
  kv["dim"] = std::to_string(dim());
  kv["normal"] = join_ll(normal.v);
  kv["anchor"] = join_rat(base.anchor);
  for (size_t i = 0; i < base.frame.size(); ++i)
    kv["frame_" + std::to_string(i + 1)] = join_ll(base.frame[i]);
  kv["lengths"] = join_rat(base.side_lengths);
  kv["n"] = std::to_string(base.scale);
  kv["height_rule"] = height_rule_name(height_fn.rule);
  kv["height_param"] = height_fn.c.str();
  return kv;
}

CylinderSpec CylinderSpec::from_kv(
    const std::map<std::string, std::string>& kv) {
  auto need = [&kv](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end())
      throw Error(Err::InvalidSpec, "missing spec key '" + k + "'");
    return it->second;
  };
  CylinderSpec spec;
  int d = static_cast<int>(std::stoll(need("dim")));
  if (d < 2) throw Error(Err::InvalidSpec, "dim must be >= 2");
  spec.normal.v = parse_ll_list(need("normal"));
  if (static_cast<int>(spec.normal.v.size()) != d)
    throw Error(Err::InvalidSpec, "normal dimension mismatch");
  if (kv.count("anchor")) {
    spec.base.anchor = parse_rat_list(kv.at("anchor"));
  } else {
    spec.base.anchor.assign(d, Rat(0));
  }
  for (int i = 1; i <= d - 1; ++i) {
    std::string key = "frame_" + std::to_string(i);
    if (kv.count(key)) spec.base.frame.push_back(parse_ll_list(kv.at(key)));
  }
  if (spec.base.frame.empty()) spec.base.frame = orthogonal_frame(spec.normal);
  if (static_cast<int>(spec.base.frame.size()) != d - 1)
    throw Error(Err::InvalidSpec, "need d-1 frame vectors");
  spec.base.side_lengths = parse_rat_list(need("lengths"));
  if (spec.base.side_lengths.size() == 1 && d > 2)
    spec.base.side_lengths.assign(d - 1, spec.base.side_lengths[0]);
  spec.base.scale = std::stoll(need("n"));
  spec.height_fn.rule = height_rule_from_string(need("height_rule"));
  spec.height_fn.c = Rat::parse(need("height_param"));
  spec.height = spec.height_fn.value(spec.base.scale);
  spec.validate();
  return spec;
}

CylinderSpec SpecFamily::at(long long n) const {
  CylinderSpec spec;
  spec.base = base;
  spec.base.scale = n;
  spec.normal = normal;
  spec.height_fn = height_fn;
  spec.height = height_fn.value(n);
  spec.validate();
  return spec;
}

bool point_in_cylinder(const CylinderSpec& spec,
                       const std::vector<long long>& p) {
  const auto q = point_minus_anchor(spec, p);
  // |t| <= h, squared against |v|^2
  Rat sv = dot_rat(q, spec.normal.v);
  Rat w(spec.normal.norm2());
  if (sv * sv > spec.height * spec.height * w) return false;
  // base coordinates within [0, n * len_j] along each unit frame direction
  for (size_t j = 0; j < spec.base.frame.size(); ++j) {
    Rat r = dot_rat(q, spec.base.frame[j]);
    if (r.sign() < 0) return false;
    Rat lim = Rat(spec.base.scale) * spec.base.side_lengths[j];
    Rat f2(dot_ll(spec.base.frame[j], spec.base.frame[j]));
    if (r * r > lim * lim * f2) return false;
  }
  return true;
}

bool edge_in_region(const std::vector<long long>& x,
                    const std::vector<long long>& y,
                    const CylinderSpec& spec) {
  spec.validate();
  long long dist = 0;
  for (size_t i = 0; i < x.size(); ++i) dist += std::llabs(x[i] - y[i]);
  if (dist != 1) throw Error(Err::InvalidInput, "not a nearest-neighbour pair");
  return point_in_cylinder(spec, x) && point_in_cylinder(spec, y);
}

int hyperplane_side(const CylinderSpec& spec,
                    const std::vector<long long>& p) {
  const auto q = point_minus_anchor(spec, p);
  return dot_rat(q, spec.normal.v).sign();
}

bool segment_meets_face(const CylinderSpec& spec,
                        const std::vector<long long>& x,
                        const std::vector<long long>& y, int side) {
  const long long w = spec.normal.norm2();
  const Rat h = spec.height;
  const auto qx = point_minus_anchor(spec, x);
  Rat sx = dot_rat(qx, spec.normal.v);
  // signed height comparison: t(x) == side*h  <=>  sx == side*h*sqrt(w)
  const Rat h2w = h * h * Rat(w);
  const bool x_on_face = (sx * sx == h2w) && sx.sign() * side >= 0;
  if (x_on_face && point_in_cylinder(spec, x)) return true;

  std::vector<Rat> qy(qx.size());
  for (size_t i = 0; i < qy.size(); ++i) qy[i] = Rat(y[i]) - spec.base.anchor[i];
  Rat sy = dot_rat(qy, spec.normal.v);
  // need t(y) strictly beyond the face
  if (!(sy.sign() * side > 0 && sy * sy > h2w)) return false;

  // crossing point z = x + lambda*(y-x) with t(z) = side*h; lambda in (0,1).
  // Base coordinate along frame j at the crossing:
  //   rho_j = (P_j + Q_j * sqrt(w)) / ds   with ds = sy - sx (sign = side)
  Rat ds = sy - sx;
  for (size_t j = 0; j < spec.base.frame.size(); ++j) {
    const auto& f = spec.base.frame[j];
    Rat rx = dot_rat(qx, f);
    Rat dr = dot_rat(qy, f) - rx;
    Rat P = rx * ds - dr * sx;
    Rat Q = dr * h * Rat(side);
    long long f2 = dot_ll(f, f);
    Rat lim = Rat(spec.base.scale) * spec.base.side_lengths[j];
    // rho_j >= 0
    {
      auto s = common_scale({P, Q});
      if (side * sign_with_radical(s[0], s[1], w) < 0) return false;
    }
    // rho_j <= lim * sqrt(f2)
    {
      Rat C = -(ds * lim);
      auto s = common_scale({P, Q, C});
      if (side * sign_with_radicals(s[0], s[1], w, s[2], f2) > 0) return false;
    }
  }
  return true;
}

std::vector<std::vector<long long>> orthogonal_frame(const Direction& normal) {
  normal.validate();
  const int d = normal.dim();
  std::vector<std::vector<Rat>> basis;  // rows orthogonal to normal and each other
  std::vector<std::vector<Rat>> done;
  std::vector<Rat> nv(d);
  for (int i = 0; i < d; ++i) nv[i] = Rat(normal.v[i]);
  done.push_back(nv);
  for (int k = 0; k < d && static_cast<int>(done.size()) < d; ++k) {
    std::vector<Rat> cand(d, Rat(0));
    cand[k] = Rat(1);
    // subtract projections onto vectors already accepted
    for (const auto& u : done) {
      Rat num(0), den(0);
      for (int i = 0; i < d; ++i) {
        num += cand[i] * u[i];
        den += u[i] * u[i];
      }
      Rat coef = num / den;
      for (int i = 0; i < d; ++i) cand[i] -= coef * u[i];
    }
    bool zero = true;
    for (const Rat& c : cand)
      if (!c.is_zero()) zero = false;
    if (zero) continue;
    done.push_back(cand);
    basis.push_back(cand);
  }
  std::vector<std::vector<long long>> out;
  for (const auto& b : basis) {
    long long l = 1;
    for (const Rat& c : b) l = std::lcm(l, c.den);
    std::vector<long long> iv(d);
    long long g = 0;
    for (int i = 0; i < d; ++i) {
      iv[i] = b[i].num * (l / b[i].den);
      g = std::gcd(g, iv[i] < 0 ? -iv[i] : iv[i]);
    }
    if (g > 1)
      for (auto& c : iv) c /= g;
    out.push_back(iv);
  }
  return out;
}

SpecFamily straight_family(int dim, const std::vector<Rat>& lengths,
                           HeightFunction h) {
  SpecFamily fam;
  fam.normal.v.assign(dim, 0);
  fam.normal.v[dim - 1] = 1;
  fam.base.anchor.assign(dim, Rat(0));
  for (int j = 0; j < dim - 1; ++j) {
    std::vector<long long> f(dim, 0);
    f[j] = 1;
    fam.base.frame.push_back(f);
  }
  fam.base.side_lengths = lengths;
  fam.height_fn = h;
  return fam;
}

}  // namespace fpplab
