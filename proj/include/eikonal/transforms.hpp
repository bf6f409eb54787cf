#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "eikonal/field.hpp"
#include "eikonal/implicit.hpp"
#include "eikonal/profile.hpp"
#include "eikonal/solution.hpp"

namespace eik {

// ---------------------------------------------------------------------------
// Hodograph transform: u = y0, x0 = w, x1 = y1, x2 = y2.
// ---------------------------------------------------------------------------

struct HodographOptions {
  /// Search interval for the swapped coordinate; defaults to the field's
  /// domain_hint along axis 0.
  std::optional<std::pair<double, double>> range;
  int scan_cells = 256;
};

struct HodographValue {
  double w = 0.0;
  double v = 0.0;
};

/// w(y) = the x0 with u(x0, y1, y2) = y0. Throws NoRoot, or NonMonotone when
/// the search interval holds several solutions or u is constant in x0.
double hodograph_w(const ScalarField& u, const ParamPoint& y, const HodographOptions& opts = {});

/// (w(y), v(w(y), y1, y2)).
HodographValue hodograph_forward(const ScalarField& u, const ScalarField& v, const ParamPoint& y,
                                 const HodographOptions& opts = {});

/// Inverse direction: u(x) = the y0 with w(y0, x1, x2) = x0.
double hodograph_inverse(const ScalarField& w, const SpacetimePoint& x, const HodographOptions& opts = {});

/// ScalarField y ↦ w(y) built on hodograph_w.
ScalarField hodograph_field(const ScalarField& u, const Box& y_domain, const HodographOptions& opts = {});

struct DerivativeDefects {
  double match = 0.0;             // |w(u(x), x1, x2) − x0|
  std::vector<double> relations;  // |lhs − rhs| per derivative relation
  double max() const;
};

/// Finite-difference check of u_{x0} = 1/w_{y0}, u_{x1} = −w_{y1}/w_{y0},
/// u_{x2} = −w_{y2}/w_{y0} at the matched pair (x, y = (u(x), x1, x2)).
/// With v given in both spaces the three v relations are checked as well.
DerivativeDefects hodograph_derivative_check(const ScalarField& u, const ScalarField& w, const SpacetimePoint& x,
                                             double h = 1e-5,
                                             const std::optional<std::pair<ScalarField, ScalarField>>& v_x_y = {});

// ---------------------------------------------------------------------------
// Contact (Legendre) transform in the middle coordinate.
// ---------------------------------------------------------------------------

struct LegendreOptions {
  /// Search interval for the solved coordinate; defaults to domain_hint axis 1.
  std::optional<std::pair<double, double>> range;
  int scan_cells = 200;
  double fd_step = 1e-5;
  /// Picks the solution nearest to this value when several exist; without
  /// a hint several solutions raise NonMonotone.
  std::optional<double> hint;
};

struct LegendreValue {
  double value = 0.0;   // transformed function value
  double matched = 0.0; // solved coordinate (y1 for forward, z1 for inverse)
};

/// H(z) = y1 z1 − w(z0, y1, z2) where w_{y1}(z0, y1, z2) = z1.
/// Throws NoRoot, NonMonotone, or FlatDirection when w is (numerically) linear in y1.
LegendreValue legendre_forward(const ScalarField& w, const ParamPoint& z, const LegendreOptions& opts = {});

/// w(y) = z1 y1 − H(y0, z1, y2) where H_{z1}(y0, z1, y2) = y1, i.e. w = z1 H_{z1} − H.
LegendreValue legendre_inverse(const ScalarField& h, const ParamPoint& y, const LegendreOptions& opts = {});

/// ScalarField z ↦ H(z) built on legendre_forward (z1 domain supplied by caller).
ScalarField legendre_field(const ScalarField& w, const Box& z_domain, const LegendreOptions& opts = {});

/// H = z2 √(1−z1²) + g(z1) z0 + k(z1) with its partial derivatives.
struct HDerivatives {
  double h = 0.0;
  double h_z0 = 0.0;
  double h_z1 = 0.0;
  double h_z2 = 0.0;
  double h_z1z1 = 0.0;
  double h_z1z2 = 0.0;
  double h_z0z1 = 0.0;
  double h_z0z0 = 0.0;  // identically zero
  double h_z0z2 = 0.0;  // identically zero
};

/// Throws DomainError for |z1| >= 1.
HDerivatives build_H(const GeneratorPair& gen, const ParamPoint& z);

/// H as a field over (z0, z1, z2) with analytic gradient.
ScalarField h_field(const GeneratorPair& gen, double z_margin = 1e-8);

/// Second derivatives of w recovered from H through the contact relations.
struct WSecondDerivatives {
  double w_y1y1 = 0.0;
  double w_y1y2 = 0.0;
  double w_y0y1 = 0.0;
  double w_y0y2 = 0.0;
};
WSecondDerivatives contact_second_derivatives(const HDerivatives& h);

/// (|(g − z1 g′)² − 2p − g′²|, |r′ − k″((z1² − 1)g′ − z1 g)|), both zero for
/// profiles derived from the generators.
std::pair<double, double> check_reduction_conditions(const GeneratorPair& gen, double z1);

/// Run the chain H → w (inverse contact) → u (inverse hodograph) at a point
/// where eval_uv succeeds, and compare against the direct evaluation.
struct ChainDefects {
  double z = 0.0;
  double x0 = 0.0;  // |w(y) − x0|, y = (u, x1, x2)
  double u = 0.0;   // |u from the inverse hodograph − u from eval_uv|
  double v = 0.0;   // |v from the Hamilton–Jacobi form − v from eval_uv|
  double max() const { return std::max({x0, u, v}); }
};
ChainDefects pipeline_closure(const GeneratorPair& gen, const SpacetimePoint& x, Branch branch,
                              const RootOptions& opts = {});

}  // namespace eik
