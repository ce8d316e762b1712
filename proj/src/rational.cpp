#include "reciprosim/rational.hpp"

#include <cstdlib>

namespace reciprosim {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v, const char* what) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) fail(Err::Overflow, what);
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational Rational::make(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(Err::Overflow, "rational with zero denominator");
  if (d < 0) {
    if (n == INT64_MIN || d == INT64_MIN) fail(Err::Overflow, "rational normalization");
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num = n;
  r.den = d;
  return r;
}

bool Rational::operator<(const Rational& o) const {
  return i128(num) * o.den < i128(o.num) * den;
}

Rational Rational::operator+(const Rational& o) const {
  // Pre-divide by the denominators' gcd to keep intermediates small.
  std::int64_t dg = std::gcd(den, o.den);
  i128 n = i128(num) * (o.den / dg) + i128(o.num) * (den / dg);
  i128 d = i128(den / dg) * o.den;
  return make(narrow(n, "rational addition overflow"), narrow(d, "rational addition overflow"));
}

Rational Rational::operator-(const Rational& o) const {
  Rational neg;
  if (o.num == INT64_MIN) fail(Err::Overflow, "rational negation overflow");
  neg.num = -o.num;
  neg.den = o.den;
  return *this + neg;
}

Rational Rational::operator*(const Rational& o) const {
  std::int64_t g1 = std::gcd(num < 0 ? -num : num, o.den);
  std::int64_t g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
  i128 n = i128(num / g1) * (o.num / g2);
  i128 d = i128(den / g2) * (o.den / g1);
  return make(narrow(n, "rational multiplication overflow"),
              narrow(d, "rational multiplication overflow"));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) fail(Err::Overflow, "rational division by zero");
  Rational inv;
  inv.num = o.den;
  inv.den = o.num;
  if (inv.den < 0) {
    inv.num = -inv.num;
    inv.den = -inv.den;
  }
  return *this * inv;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string Rational::decimal6() const {
  // round(num * 10^6 / den), half away from zero, then digit-split.
  i128 scaled = i128(num) * 1000000;
  i128 q = scaled / den;
  i128 r = scaled % den;
  if (r < 0) r = -r;
  if (2 * r >= i128(den)) q += (num < 0 ? -1 : 1);
  bool neg = q < 0;
  if (neg) q = -q;
  std::int64_t whole = narrow(q / 1000000, "decimal rendering overflow");
  std::int64_t frac = static_cast<std::int64_t>(q % 1000000);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", neg ? "-" : "",
                static_cast<long long>(whole), static_cast<long long>(frac));
  return buf;
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) fail(Err::ParseError, "empty rational");
  std::size_t slash = s.find('/');
  auto parse_int = [&](const std::string& part) -> std::int64_t {
    if (part.empty()) fail(Err::ParseError, "empty integer in rational '" + s + "'");
    std::size_t i = part[0] == '-' ? 1 : 0;
    if (i == part.size()) fail(Err::ParseError, "bad rational '" + s + "'");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') fail(Err::ParseError, "bad rational '" + s + "'");
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(part.c_str(), &end, 10);
    if (errno != 0 || end != part.c_str() + part.size())
      fail(Err::ParseError, "rational out of range '" + s + "'");
    return v;
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  std::int64_t num = parse_int(s.substr(0, slash));
  std::int64_t den = parse_int(s.substr(slash + 1));
  if (den == 0) fail(Err::ParseError, "zero denominator in rational '" + s + "'");
  return make(num, den);
}

std::int64_t floor_mul(std::int64_t a, const Rational& r) {
  if (a < 0) fail(Err::Overflow, "floor_mul on negative amount");
  i128 n = i128(a) * r.num;
  i128 q = n / r.den;
  if (n % r.den != 0 && n < 0) q -= 1;  // only reachable with negative rationals
  if (q > i128(INT64_MAX) || q < i128(INT64_MIN)) fail(Err::Overflow, "floor_mul overflow");
  return static_cast<std::int64_t>(q);
}

}  // namespace reciprosim
