#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "reciprosim/error.hpp"

namespace reciprosim {

// Exact rational over int64, always normalized (gcd 1, den > 0).
// Comparisons and arithmetic go through __int128 and fail loudly on overflow
// instead of silently losing exactness.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rational make(std::int64_t n, std::int64_t d);

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool is_integer() const { return den == 1; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  // "n" when integral, "n/d" otherwise.
  std::string str() const;
  // Fixed 6 decimal places, round half away from zero. Deterministic integer math.
  std::string decimal6() const;

  // Parses "n" or "n/d". Throws ParseError on anything else.
  static Rational parse(const std::string& s);
};

// floor(a * r) for non-negative a; exact integer result.
std::int64_t floor_mul(std::int64_t a, const Rational& r);

}  // namespace reciprosim
