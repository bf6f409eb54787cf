#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace eik {

using Vec3 = std::array<double, 3>;

/// Axis-aligned box, inclusive bounds per coordinate.
struct Box {
  Vec3 lo{-1.0, -1.0, -1.0};
  Vec3 hi{1.0, 1.0, 1.0};

  bool contains(const Vec3& p) const {
    for (int i = 0; i < 3; ++i) {
      if (!(p[i] >= lo[i] && p[i] <= hi[i])) return false;
    }
    return true;
  }
};

/// A real field on R^3 with an optional analytic gradient. `eval` throws
/// eik::Error (never returns NaN) where the field is undefined.
struct ScalarField {
  std::function<double(const Vec3&)> eval;
  std::function<Vec3(const Vec3&)> gradient;
  Box domain_hint;

  double operator()(const Vec3& p) const { return eval(p); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
};

inline bool all_finite(const Vec3& p) {
  return std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]);
}

/// Minkowski product a0 b0 - a1 b1 - a2 b2.
inline double minkowski(const Vec3& a, const Vec3& b) { return a[0] * b[0] - a[1] * b[1] - a[2] * b[2]; }

}  // namespace eik
