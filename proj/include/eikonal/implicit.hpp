#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eikonal/error.hpp"
#include "eikonal/field.hpp"
#include "eikonal/profile.hpp"

namespace eik {

/// Coordinates (x0, x1, x2) of the original space.
using SpacetimePoint = Vec3;

struct RootOptions {
  double z_margin = 1e-8;  // search only |z| <= 1 - z_margin
  int scan_cells = 512;
  double root_tol = 1e-13;
  int max_roots = 16;

  void validate() const;
};

/// |g'| below this makes the phase equation undefined.
inline constexpr double kDegenerateGPrime = 1e-14;

struct SkippedCell {
  double lo;
  double hi;
  ErrorCode reason;  // DegenerateGenerator, DomainError, NoRoot (tolerance not met)
};

/// Roots are located in the angle θ with z = sin θ, so that √(1−z²) = cos θ
/// keeps full relative precision as |z| approaches 1.
struct RootScan {
  std::vector<double> roots;   // ascending
  std::vector<double> angles;  // θ of each root
  std::vector<SkippedCell> skipped;
  bool truncated = false;  // more than max_roots sign changes
};

/// Everything the phase equation and the solution formulas need at one
/// (x, z): generator jets, the radical s = √(1−z²), and
/// A = x1 + x2 z/s − k′ (so that u = A/g′).
struct PhaseTerms {
  GeneratorJets jets;
  double z = 0.0;
  double s = 0.0;
  double a = 0.0;     // A
  double a_z = 0.0;   // ∂A/∂z = x2/s³ − k″
  double f = 0.0;     // F
  double f_z = 0.0;   // ∂F/∂z
};

/// Throws DomainError for |z| >= 1, DegenerateGenerator for |g′| < 1e-14.
PhaseTerms phase_terms(const GeneratorPair& gen, const SpacetimePoint& x, double z);

/// The same terms at z = sin θ, with s = cos θ.
PhaseTerms phase_terms_angle(const GeneratorPair& gen, const SpacetimePoint& x, double theta);

/// Largest |θ| searched, i.e. |sin θ| <= 1 − z_margin.
double angle_limit(const RootOptions& opts);

/// F(z; x) = x0 − x1 z + x2 √(1−z²) + (g/g′)(x1 + x2 z/√(1−z²) − k′) + k.
double phase_residual(const GeneratorPair& gen, const SpacetimePoint& x, double z);

/// ∂F/∂z assembled from second-order jets of g and k.
double phase_residual_dz(const GeneratorPair& gen, const SpacetimePoint& x, double z);

/// All roots of F(·; x) on [−1 + z_margin, 1 − z_margin], ascending.
/// An empty list means no branch exists at x. Throws DegenerateManifold when
/// |F| < root_tol at every scan node.
RootScan solve_z(const GeneratorPair& gen, const SpacetimePoint& x, const RootOptions& opts = {});

/// Selects one root of a scan: by ascending index, or the root of smallest |z|.
class Branch {
 public:
  static constexpr Branch index(std::size_t i) { return Branch(i); }
  static constexpr Branch nearest_zero() { return Branch(kNearestZero); }

  bool is_nearest_zero() const noexcept { return index_ == kNearestZero; }
  std::size_t position() const noexcept { return index_; }

  /// Throws NoRoot when the requested branch does not exist.
  double pick(const std::vector<double>& ascending_roots) const;

  std::string describe() const;

 private:
  static constexpr std::size_t kNearestZero = std::numeric_limits<std::size_t>::max();
  constexpr explicit Branch(std::size_t i) : index_(i) {}
  std::size_t index_;
};

/// Newton refinement of a root of F(·; x) starting from a nearby root
/// `z_hint` of a neighbouring point. Falls back to a full scan and picks the
/// root closest to the hint. Throws NoRoot when no root lies within
/// `max_shift` of the hint.
double track_root(const GeneratorPair& gen, const SpacetimePoint& x, double z_hint, const RootOptions& opts,
                  double max_shift = 1e-2);

/// track_root in the angle: takes and returns θ (z = sin θ); `max_shift` is
/// still measured in z.
double track_root_angle(const GeneratorPair& gen, const SpacetimePoint& x, double theta_hint,
                        const RootOptions& opts, double max_shift = 1e-2);

/// Shared scan driver for any phase-like function of θ (z = sin θ) on
/// [−angle_limit, angle_limit]: scan, bracket, refine by safeguarded Newton
/// and de-duplicate. `f_df` returns the value and its θ-derivative. `f_df` may throw Error;
/// cells whose endpoints throw are reported as skipped. `cell_guard(z_lo, z_hi)`
/// may veto a bracket (returning the skip reason) before refinement.
struct PhaseFunction {
  std::function<void(double, double&, double&)> f_df;
  std::function<std::optional<ErrorCode>(double, double)> cell_guard;
};
RootScan scan_phase_roots(const PhaseFunction& phase, const RootOptions& opts);

/// Extra Newton steps from an accepted root while |f| keeps decreasing, so
/// the root is resolved to rounding level rather than just to tolerance.
double polish_root(const std::function<void(double, double&, double&)>& f_df, double z, double lo, double hi);

}  // namespace eik
