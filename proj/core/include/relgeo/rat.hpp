#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace relgeo {

// Exact rational thresholds. Every "length < lambda * |w|" style comparison
// in the small-cancellation and alpha checkers goes through integer cross
// multiplication so that e.g. lambda = 1/6 never suffers float fuzz.
struct Rat {
  long long num = 0;
  long long den = 1;

  constexpr Rat() = default;
  Rat(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }
  explicit Rat(long long n) : num(n), den(1) {}

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }
};

// x < r * scale  as integers
inline bool lt_scaled(long long x, const Rat& r, long long scale) {
  return x * r.den < r.num * scale;
}
// x <= r * scale
inline bool le_scaled(long long x, const Rat& r, long long scale) {
  return x * r.den <= r.num * scale;
}

// Parses "p/q" or "p".
Rat parse_rat(const std::string& s);

}  // namespace relgeo
