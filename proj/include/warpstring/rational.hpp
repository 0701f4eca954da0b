#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace warpstring {

/// Exact rational with reduced numerator/denominator, denominator > 0.
/// Counting invariants are rationals by definition; they are never
/// represented in floating point.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational reduced(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return Rational{n, d};
  }

  Rational operator+(const Rational& o) const {
    // gcd-first addition keeps intermediates small at this scale
    const std::int64_t g = std::gcd(den, o.den);
    const std::int64_t l = den / g * o.den;
    return reduced(num * (l / den) + o.num * (l / o.den), l);
  }

  bool operator==(const Rational& o) const = default;

  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace warpstring
