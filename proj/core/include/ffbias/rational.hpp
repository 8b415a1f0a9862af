#ifndef FFBIAS_RATIONAL_HPP
#define FFBIAS_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "ffbias/error.hpp"

namespace ffbias {

// Exact rational on int64 with 128-bit intermediates.  Census measures are
// fractions count/q^{nN}; everything downstream (deltas, squared scaled
// deviations) stays well inside this range once reduced, and any genuine
// overflow throws instead of wrapping.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }
  static Rational from_int(std::int64_t n) { return Rational(n, 1); }

  void reduce() {
    if (den == 0) raise(errc::division_by_zero, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  bool is_zero() const { return num == 0; }

  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
      raise(errc::arithmetic_overflow, "rational arithmetic exceeds 64-bit range");
    return static_cast<std::int64_t>(v);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return make_reduced(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return make_reduced(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    __int128 n = (__int128)(a.num / (g1 ? g1 : 1)) * (b.num / (g2 ? g2 : 1));
    __int128 d = (__int128)(a.den / (g2 ? g2 : 1)) * (b.den / (g1 ? g1 : 1));
    return make_reduced(n, d);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den <= (__int128)b.num * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  Rational abs() const { return num < 0 ? Rational(-num, den) : *this; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static Rational make_reduced(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num = checked(n);
    r.den = checked(d);
    if (r.num == 0) r.den = 1;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
  }
};

// (base)^exp as a rational, exp may be negative.
inline Rational rational_pow(std::uint64_t base, int exp) {
  Rational r = Rational::from_int(1);
  Rational b = exp >= 0 ? Rational::from_int((std::int64_t)base)
                        : Rational(1, (std::int64_t)base);
  int e = exp >= 0 ? exp : -exp;
  for (int i = 0; i < e; ++i) r = r * b;
  return r;
}

}  // namespace ffbias

#endif
