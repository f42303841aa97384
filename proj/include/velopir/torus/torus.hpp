#pragma once

#include <cmath>
#include <cstdint>

namespace velopir {

/// A point of the real torus R/Z stored as a 32-bit fixed-point fraction:
/// the word v stands for v / 2^32. Addition, subtraction and negation wrap
/// modulo 2^32, which is exactly torus arithmetic.
struct Torus {
  std::uint32_t raw = 0;

  constexpr Torus() = default;
  constexpr explicit Torus(std::uint32_t v) : raw(v) {}

  /// Nearest representable point to x mod 1 (error at most 2^-33).
  static Torus from_real(double x) {
    double frac = x - std::floor(x);
    auto v = static_cast<std::uint64_t>(std::llround(std::ldexp(frac, 32)));
    return Torus(static_cast<std::uint32_t>(v));
  }

  /// Representative in [0, 1).
  double to_real() const { return std::ldexp(static_cast<double>(raw), -32); }
  /// Representative in [-1/2, 1/2).
  double to_signed_real() const {
    return std::ldexp(static_cast<double>(static_cast<std::int32_t>(raw)), -32);
  }
  constexpr std::int32_t as_signed() const { return static_cast<std::int32_t>(raw); }

  constexpr Torus& operator+=(Torus o) {
    raw += o.raw;
    return *this;
  }
  constexpr Torus& operator-=(Torus o) {
    raw -= o.raw;
    return *this;
  }
  friend constexpr Torus operator+(Torus a, Torus b) { return Torus(a.raw + b.raw); }
  friend constexpr Torus operator-(Torus a, Torus b) { return Torus(a.raw - b.raw); }
  friend constexpr Torus operator-(Torus a) { return Torus(0u - a.raw); }
  /// Integer multiple; the torus is a Z-module.
  friend constexpr Torus operator*(std::int32_t k, Torus a) {
    return Torus(static_cast<std::uint32_t>(k) * a.raw);
  }
  friend constexpr bool operator==(Torus a, Torus b) = default;
};

/// Torus value p / 2^log2_q, for building exact dyadic constants.
constexpr Torus dyadic(std::int64_t p, unsigned log2_q) {
  return Torus(static_cast<std::uint32_t>(static_cast<std::uint64_t>(p) << (32 - log2_q)));
}

/// Shortest distance between two torus points, in torus units.
inline double torus_distance(Torus a, Torus b) {
  return std::fabs((a - b).to_signed_real());
}

}  // namespace velopir
