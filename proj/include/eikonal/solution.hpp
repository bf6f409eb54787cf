#pragma once

#include <cstddef>
#include <utility>

#include "eikonal/field.hpp"
#include "eikonal/implicit.hpp"
#include "eikonal/profile.hpp"

namespace eik {

/// Coordinates of the hodograph space (y0, y1, y2); the contact-space
/// triple (z0, z1, z2) reuses the same type.
using ParamPoint = Vec3;

/// |g′| and |∂F/∂z| below these reject a root.
inline constexpr double kMinGPrimeAtRoot = 1e-10;
inline constexpr double kCausticThreshold = 1e-10;

/// One branch of the solution (u, v) at a spacetime point.
struct BranchedSample {
  SpacetimePoint x{};
  double z = 0.0;
  std::size_t branch = 0;  // ascending root index at x
  double u = 0.0;
  double v = 0.0;
  Vec3 grad_u{};
  Vec3 grad_v{};
  /// (u·u, v·v, u·v − 1) in the Minkowski product, from the stored gradients.
  Vec3 residuals{};
  double phase_dz = 0.0;
};

/// Evaluate u, v and their exact gradients on one branch of the phase root.
/// Throws NoRoot, DegenerateGenerator, CausticPoint, DegenerateManifold.
BranchedSample eval_uv(const GeneratorPair& gen, const SpacetimePoint& x, Branch branch,
                       const RootOptions& opts = {});

/// Same, at a root z already known to solve the phase equation at x.
BranchedSample eval_uv_at_root(const GeneratorPair& gen, const SpacetimePoint& x, double z);
/// Same, at the root z = sin θ; preferred near |z| = 1.
BranchedSample eval_uv_at_angle(const GeneratorPair& gen, const SpacetimePoint& x, double theta);

std::pair<Vec3, Vec3> grad_uv(const GeneratorPair& gen, const SpacetimePoint& x, Branch branch,
                              const RootOptions& opts = {});

/// One branch of the Hamilton–Jacobi pair (w, v) in hodograph space.
struct HjSample {
  ParamPoint y{};
  double z = 0.0;
  std::size_t branch = 0;
  double w = 0.0;
  double v = 0.0;
  Vec3 grad_w{};
  Vec3 grad_v{};
  /// (w₁² + w₂² − 1, v₁² + v₂² − 2v₀, v₁w₁ + v₂w₂ − w₀).
  Vec3 residuals{};
};

/// Roots of the constraint y1 + y2 z/√(1−z²) − g′(z) y0 − k′(z) = 0.
RootScan solve_hj_z(const GeneratorPair& gen, const ParamPoint& y, const RootOptions& opts = {});

/// w = y1 z − y2 √(1−z²) − g y0 − k and v = g y2/√(1−z²) + p y0 + r on the
/// chosen constraint root. Throws NoRoot, CausticPoint.
HjSample eval_hj(const GeneratorPair& gen, const ParamPoint& y, Branch branch, const RootOptions& opts = {});

HjSample eval_hj_at_root(const GeneratorPair& gen, const ParamPoint& y, double z);
HjSample eval_hj_at_angle(const GeneratorPair& gen, const ParamPoint& y, double theta);

/// Fields that follow the root continuously from `z_hint` (see track_root),
/// for finite-difference probing around a sample. Gradients are analytic.
std::pair<ScalarField, ScalarField> solution_fields(const GeneratorPair& gen, double z_hint,
                                                    const RootOptions& opts = {});
std::pair<ScalarField, ScalarField> hj_fields(const GeneratorPair& gen, double z_hint,
                                              const RootOptions& opts = {});

/// Root of the constraint near `z_hint`; analogous to track_root.
double track_hj_root(const GeneratorPair& gen, const ParamPoint& y, double z_hint, const RootOptions& opts,
                     double max_shift = 1e-2);
double track_hj_root_angle(const GeneratorPair& gen, const ParamPoint& y, double theta_hint,
                           const RootOptions& opts, double max_shift = 1e-2);

}  // namespace eik
