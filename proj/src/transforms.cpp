#include "eikonal/transforms.hpp"

#include <cmath>
#include <limits>

#include "eikonal/rootfind.hpp"
#include "eikonal/verify.hpp"

namespace eik {
namespace {

// Spread of a first derivative across the whole search interval below which
// the direction counts as flat.
constexpr double kFlatSpread = 1e-8;
constexpr double kFlatCurvature = 1e-10;

std::pair<double, double> axis_range(const std::optional<std::pair<double, double>>& range, const Box& box,
                                     int axis) {
  const auto r = range.value_or(std::pair{box.lo[axis], box.hi[axis]});
  if (!(r.second > r.first) || !std::isfinite(r.first) || !std::isfinite(r.second)) {
    fail(ErrorCode::InvalidArgument, "search interval must be finite with hi > lo");
  }
  return r;
}

/// The unique (or hint-nearest) zero of phi on [lo, hi].
double solve_scalar(const std::function<double(double)>& phi, double lo, double hi, int cells,
                    std::optional<double> hint, const char* what) {
  const SignScan scan = scan_sign_changes(phi, lo, hi, cells, 1e-14);
  if (scan.near_zero_everywhere) {
    fail(ErrorCode::NonMonotone, std::string(what) + ": equation holds on the whole interval");
  }
  std::vector<double> candidates = scan.node_roots;
  for (const Bracket& b : scan.brackets) {
    const RootResult r = bracketed_secant(phi, b.lo, b.hi, 0.0);
    candidates.push_back(r.x);
  }
  if (candidates.empty()) fail(ErrorCode::NoRoot, std::string(what) + ": no solution in the search interval");
  if (candidates.size() == 1) return candidates.front();
  if (!hint) {
    fail(ErrorCode::NonMonotone,
         std::string(what) + ": " + std::to_string(candidates.size()) + " solutions in the search interval");
  }
  double best = candidates.front();
  for (double c : candidates) {
    if (std::abs(c - *hint) < std::abs(best - *hint)) best = c;
  }
  return best;
}

double partial(const ScalarField& f, const Vec3& p, int axis, double h) {
  if (f.has_gradient()) return f.gradient(p)[static_cast<std::size_t>(axis)];
  const double step = h * (1.0 + std::abs(p[static_cast<std::size_t>(axis)]));
  Vec3 plus = p, minus = p;
  plus[static_cast<std::size_t>(axis)] += step;
  minus[static_cast<std::size_t>(axis)] -= step;
  return (f(plus) - f(minus)) / (plus[static_cast<std::size_t>(axis)] - minus[static_cast<std::size_t>(axis)]);
}

/// Shared core of both contact directions: find t with ∂f/∂(axis 1) = slope
/// at (p0, t, p2); return (t · slope − f, t).
LegendreValue conjugate(const ScalarField& f, double p0, double slope, double p2, const LegendreOptions& opts,
                        const char* what) {
  const auto [lo, hi] = axis_range(opts.range, f.domain_hint, 1);
  auto derivative = [&](double t) { return partial(f, Vec3{p0, t, p2}, 1, opts.fd_step); };

  // Flatness over the interval: the derivative barely moves.
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = -dmin;
  for (int i = 0; i <= opts.scan_cells; ++i) {
    const double t = lo + (hi - lo) * i / opts.scan_cells;
    try {
      const double d = derivative(t);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    } catch (const Error&) {
    }
  }
  if (dmax >= dmin && dmax - dmin < kFlatSpread) {
    fail(ErrorCode::FlatDirection, std::string(what) + ": function is linear in the transformed coordinate");
  }

  const double t = solve_scalar([&](double s) { return derivative(s) - slope; }, lo, hi, opts.scan_cells,
                                opts.hint, what);

  const double big = 1e-3 * (1.0 + std::abs(t));
  const double curvature = (derivative(std::min(t + big, hi)) - derivative(std::max(t - big, lo))) /
                           (std::min(t + big, hi) - std::max(t - big, lo));
  if (std::abs(curvature) < kFlatCurvature) {
    fail(ErrorCode::FlatDirection, std::string(what) + ": vanishing second derivative at the matched point");
  }
  return {t * slope - f(Vec3{p0, t, p2}), t};
}

}  // namespace

double DerivativeDefects::max() const {
  double m = match;
  for (double d : relations) m = std::max(m, d);
  return m;
}

double hodograph_w(const ScalarField& u, const ParamPoint& y, const HodographOptions& opts) {
  const auto [lo, hi] = axis_range(opts.range, u.domain_hint, 0);
  auto phi = [&](double x0) { return u(Vec3{x0, y[1], y[2]}) - y[0]; };
  return solve_scalar(phi, lo, hi, opts.scan_cells, std::nullopt, "hodograph");
}

HodographValue hodograph_forward(const ScalarField& u, const ScalarField& v, const ParamPoint& y,
                                 const HodographOptions& opts) {
  const double w = hodograph_w(u, y, opts);
  return {w, v(Vec3{w, y[1], y[2]})};
}

double hodograph_inverse(const ScalarField& w, const SpacetimePoint& x, const HodographOptions& opts) {
  const auto [lo, hi] = axis_range(opts.range, w.domain_hint, 0);
  auto phi = [&](double y0) { return w(Vec3{y0, x[1], x[2]}) - x[0]; };
  return solve_scalar(phi, lo, hi, opts.scan_cells, std::nullopt, "inverse hodograph");
}

ScalarField hodograph_field(const ScalarField& u, const Box& y_domain, const HodographOptions& opts) {
  ScalarField w;
  w.eval = [u, opts](const Vec3& y) { return hodograph_w(u, y, opts); };
  w.domain_hint = y_domain;
  return w;
}

DerivativeDefects hodograph_derivative_check(const ScalarField& u, const ScalarField& w, const SpacetimePoint& x,
                                             double h,
                                             const std::optional<std::pair<ScalarField, ScalarField>>& v_x_y) {
  const ParamPoint y{u(x), x[1], x[2]};
  DerivativeDefects out;
  out.match = std::abs(w(y) - x[0]);
  const Vec3 gu = fd_gradient(u, x, h);
  const Vec3 gw = fd_gradient(w, y, h);
  if (gw[0] == 0.0) fail(ErrorCode::DomainError, "w_{y0} vanishes at the matched point");
  out.relations = {std::abs(gu[0] - 1.0 / gw[0]), std::abs(gu[1] + gw[1] / gw[0]), std::abs(gu[2] + gw[2] / gw[0])};
  if (v_x_y) {
    const Vec3 gvx = fd_gradient(v_x_y->first, x, h);
    const Vec3 gvy = fd_gradient(v_x_y->second, y, h);
    out.relations.push_back(std::abs(gvx[0] - gvy[0] / gw[0]));
    out.relations.push_back(std::abs(gvx[1] - (gvy[1] - gvy[0] * gw[1] / gw[0])));
    out.relations.push_back(std::abs(gvx[2] - (gvy[2] - gvy[0] * gw[2] / gw[0])));
  }
  return out;
}

LegendreValue legendre_forward(const ScalarField& w, const ParamPoint& z, const LegendreOptions& opts) {
  return conjugate(w, z[0], z[1], z[2], opts, "legendre_forward");
}

LegendreValue legendre_inverse(const ScalarField& h, const ParamPoint& y, const LegendreOptions& opts) {
  return conjugate(h, y[0], y[1], y[2], opts, "legendre_inverse");
}

ScalarField legendre_field(const ScalarField& w, const Box& z_domain, const LegendreOptions& opts) {
  ScalarField h;
  h.eval = [w, opts](const Vec3& z) { return legendre_forward(w, z, opts).value; };
  h.domain_hint = z_domain;
  return h;
}

HDerivatives build_H(const GeneratorPair& gen, const ParamPoint& z) {
  const double z1 = z[1];
  if (!(std::abs(z1) < 1.0)) fail(ErrorCode::DomainError, "build_H requires |z1| < 1");
  const GeneratorJets j = gen.jets(z1);
  const double s = std::sqrt(1.0 - z1 * z1);
  HDerivatives d;
  d.h = z[2] * s + j.g.val * z[0] + j.k.val;
  d.h_z0 = j.g.val;
  d.h_z1 = -z1 * z[2] / s + j.g.d1 * z[0] + j.k.d1;
  d.h_z2 = s;
  d.h_z1z1 = -z[2] / (s * s * s) + j.g.d2 * z[0] + j.k.d2;
  d.h_z1z2 = -z1 / s;
  d.h_z0z1 = j.g.d1;
  return d;
}

ScalarField h_field(const GeneratorPair& gen, double z_margin) {
  ScalarField h;
  h.eval = [gen](const Vec3& z) { return build_H(gen, z).h; };
  h.gradient = [gen](const Vec3& z) {
    const HDerivatives d = build_H(gen, z);
    return Vec3{d.h_z0, d.h_z1, d.h_z2};
  };
  const double inf = std::numeric_limits<double>::infinity();
  h.domain_hint = Box{{-inf, -1.0 + z_margin, -inf}, {inf, 1.0 - z_margin, inf}};
  return h;
}

WSecondDerivatives contact_second_derivatives(const HDerivatives& h) {
  if (h.h_z1z1 == 0.0) fail(ErrorCode::FlatDirection, "H_{z1z1} vanishes");
  WSecondDerivatives w;
  w.w_y1y1 = 1.0 / h.h_z1z1;
  w.w_y1y2 = -h.h_z1z2 / h.h_z1z1;
  w.w_y0y1 = -h.h_z0z1 / h.h_z1z1;
  const double det = h.h_z1z1 * h.h_z0z2 - h.h_z1z2 * h.h_z0z1;
  w.w_y0y2 = -det / h.h_z1z1;
  return w;
}

std::pair<double, double> check_reduction_conditions(const GeneratorPair& gen, double z1) {
  if (!(std::abs(z1) < 1.0)) fail(ErrorCode::DomainError, "reduction conditions require |z1| < 1");
  const GeneratorJets j = gen.jets(z1);
  const double g = j.g.val;
  const double gp = j.g.d1;
  const double p = profile_p(j, z1);
  const double t = g - z1 * gp;
  const double first = std::abs(t * t - 2.0 * p - gp * gp);
  const double second = std::abs(profile_r_prime(j, z1) - j.k.d2 * ((z1 * z1 - 1.0) * gp - z1 * g));
  return {first, second};
}

ChainDefects pipeline_closure(const GeneratorPair& gen, const SpacetimePoint& x, Branch branch,
                              const RootOptions& opts) {
  const BranchedSample direct = eval_uv(gen, x, branch, opts);
  const ParamPoint y{direct.u, x[1], x[2]};

  // Inverse contact transform at fixed (y0, y2), following the same branch.
  LegendreOptions lopts;
  lopts.range = std::pair{-1.0 + opts.z_margin, 1.0 - opts.z_margin};
  lopts.hint = direct.z;
  lopts.scan_cells = opts.scan_cells;
  const ScalarField h = h_field(gen, opts.z_margin);
  const LegendreValue at_y = legendre_inverse(h, y, lopts);

  ChainDefects out;
  out.z = at_y.matched;
  out.x0 = std::abs(at_y.value - x[0]);

  // Inverse hodograph: solve w(y0, x1, x2) = x0 for y0 near the direct u.
  ScalarField w;
  w.eval = [h, lopts](const Vec3& yy) { return legendre_inverse(h, yy, lopts).value; };
  HodographOptions hopts;
  const double window = 1e-2 * (1.0 + std::abs(direct.u));
  hopts.range = std::pair{direct.u - window, direct.u + window};
  hopts.scan_cells = 8;
  const double u_chain = hodograph_inverse(w, x, hopts);
  out.u = std::abs(u_chain - direct.u);

  const ParamPoint y_chain{u_chain, x[1], x[2]};
  const HjSample hj = eval_hj_at_angle(gen, y_chain, track_hj_root_angle(gen, y_chain, std::asin(at_y.matched), opts));
  out.v = std::abs(hj.v - direct.v);
  return out;
}

}  // namespace eik
