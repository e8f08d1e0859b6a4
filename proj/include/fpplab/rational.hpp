#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpplab {

// Exact rational arithmetic on int64 numerator/denominator.
// Intermediates go through __int128; a result that does not fit back into
// int64 throws instead of silently wrapping.
struct Rat {
  long long num = 0;
  long long den = 1;  // always > 0, gcd(|num|, den) == 1

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) { nn = -nn; dd = -dd; }
    reduce_assign(nn, dd);
  }

  static Rat from_i128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    Rat r;
    r.reduce_assign(n, d);
    return r;
  }

  // Parses "p/q" or "p". Also accepts a decimal like "0.25".
  static Rat parse(const std::string& s);

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  double dbl() const { return static_cast<double>(num) / static_cast<double>(den); }

  bool is_zero() const { return num == 0; }
  bool is_integer() const { return den == 1; }

  int sign() const { return (num > 0) - (num < 0); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from_i128((__int128)a.num * b.den + (__int128)b.num * a.den,
                     (__int128)a.den * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from_i128((__int128)a.num * b.den - (__int128)b.num * a.den,
                     (__int128)a.den * b.den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from_i128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw std::domain_error("rational division by zero");
    return from_i128((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const { Rat r(*this); r.num = -r.num; return r; }
  Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
  Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
  Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  // Largest integer <= value.
  long long floor() const {
    if (num >= 0) return num / den;
    return -(((-(__int128)num) + den - 1) / den);
  }
  long long ceil() const { return -(-*this).floor(); }

 private:
  void reduce_assign(__int128 n, __int128 d) {
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax)
      throw std::overflow_error("rational overflow");
    num = static_cast<long long>(n);
    den = static_cast<long long>(d);
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
  }
};

inline Rat Rat::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long p = std::stoll(s.substr(0, slash));
    long long q = std::stoll(s.substr(slash + 1));
    return Rat(p, q);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.size() > 15) tail = tail.substr(0, 15);
    long long scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    long long whole = head.empty() || head == "-" ? 0 : std::stoll(head);
    long long frac = tail.empty() ? 0 : std::stoll(tail);
    bool neg = !head.empty() && head[0] == '-';
    __int128 n = (__int128)(neg ? -whole : whole) * scale + frac;
    if (neg) n = -n;
    return from_i128(n, scale);
  }
  return Rat(std::stoll(s));
}

// ---------------------------------------------------------------------------
// Exact signs of expressions with one or two square roots. Used by the
// geometry when deciding whether a lattice segment meets a tilted face. All
// operands are pre-scaled to integers; intermediates stay within __int128 at
// the coordinate magnitudes this library works with (checked).

namespace detail {

inline int sgn128(__int128 v) { return (v > 0) - (v < 0); }

inline __int128 checked_mul(__int128 a, __int128 b) {
  if (a == 0 || b == 0) return 0;
  __int128 r = a * b;
  if (r / b != a) throw std::overflow_error("radical sign overflow");
  return r;
}

}  // namespace detail

// sign(a + b*sqrt(w)) for integer a, b and integer w >= 0.
inline int sign_with_radical(__int128 a, __int128 b, __int128 w) {
  using detail::checked_mul;
  using detail::sgn128;
  if (w < 0) throw std::invalid_argument("negative radicand");
  int sa = sgn128(a), sb = sgn128(b);
  if (sb == 0 || w == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  __int128 lhs = checked_mul(a, a);
  __int128 rhs = checked_mul(checked_mul(b, b), w);
  int sd = sgn128(lhs - rhs);
  if (sd == 0) return 0;
  return sd > 0 ? sa : sb;
}

// sign(a + b*sqrt(w) + c*sqrt(f)) for integer operands, w, f >= 0.
inline int sign_with_radicals(__int128 a, __int128 b, __int128 w, __int128 c,
                              __int128 f) {
  using detail::checked_mul;
  using detail::sgn128;
  if (w < 0 || f < 0) throw std::invalid_argument("negative radicand");
  if (c == 0 || f == 0) return sign_with_radical(a, b, w);
  if (b == 0 || w == 0) return sign_with_radical(a, c, f);
  // sign of y = b*sqrt(w) + c*sqrt(f)
  int sb = sgn128(b), sc = sgn128(c);
  int sy;
  if (sb == sc) {
    sy = sb;
  } else {
    __int128 bw = checked_mul(checked_mul(b, b), w);
    __int128 cf = checked_mul(checked_mul(c, c), f);
    int cmp = sgn128(bw - cf);
    sy = cmp == 0 ? 0 : (cmp > 0 ? sb : sc);
  }
  int sa = sgn128(a);
  if (sy == 0) return sa;
  if (sa == 0) return sy;
  if (sa == sy) return sa;
  // compare a^2 with y^2 = b^2 w + c^2 f + 2 b c sqrt(w f)
  __int128 a2 = checked_mul(a, a);
  __int128 b2w = checked_mul(checked_mul(b, b), w);
  __int128 c2f = checked_mul(checked_mul(c, c), f);
  __int128 wf = checked_mul(w, f);
  int cmp = sign_with_radical(a2 - b2w - c2f, -2 * checked_mul(b, c), wf);
  if (cmp == 0) return 0;
  return cmp > 0 ? sa : sy;
}

// Scales a list of rationals by their common denominator, preserving signs.
inline std::vector<__int128> common_scale(const std::vector<Rat>& vals) {
  long long l = 1;
  for (const Rat& v : vals) l = std::lcm(l, v.den);
  std::vector<__int128> out;
  out.reserve(vals.size());
  for (const Rat& v : vals) out.push_back((__int128)v.num * (l / v.den));
  return out;
}

}  // namespace fpplab
