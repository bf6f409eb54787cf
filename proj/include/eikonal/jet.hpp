#pragma once

#include <cmath>

namespace eik {

/// Truncated Taylor jet of order 2: value, first and second derivative
/// with respect to a single seed variable.
struct Jet2 {
  double val = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  bool finite() const { return std::isfinite(val) && std::isfinite(d1) && std::isfinite(d2); }

  friend constexpr Jet2 operator-(const Jet2& a) { return {-a.val, -a.d1, -a.d2}; }
  friend constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.val + b.val, a.d1 + b.d1, a.d2 + b.d2};
  }
  friend constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.val - b.val, a.d1 - b.d1, a.d2 - b.d2};
  }
  friend constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.val * b.val, a.d1 * b.val + a.val * b.d1,
            a.d2 * b.val + 2.0 * a.d1 * b.d1 + a.val * b.d2};
  }
  // Caller guarantees b.val != 0.
  friend constexpr Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double q = a.val / b.val;
    const double q1 = (a.d1 - q * b.d1) / b.val;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.val;
    return {q, q1, q2};
  }
};

/// Compose a scalar function with known f, f', f'' at a.val onto the jet a.
constexpr Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  return {f, df * a.d1, d2f * a.d1 * a.d1 + df * a.d2};
}

}  // namespace eik
