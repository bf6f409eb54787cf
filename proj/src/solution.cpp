#include "eikonal/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eik {
namespace {

std::size_t index_of(const std::vector<double>& roots, double z) {
  return static_cast<std::size_t>(std::find(roots.begin(), roots.end(), z) - roots.begin());
}

struct HjTerms {
  double z = 0.0;
  GeneratorJets jets;
  double s = 0.0;
  double c = 0.0;    // constraint value
  double c_z = 0.0;  // ∂/∂z of the constraint
};

HjTerms hj_terms(const GeneratorPair& gen, const ParamPoint& y, double z, double s) {
  HjTerms t;
  t.z = z;
  t.jets = gen.jets(z);
  t.s = s;
  const double s3 = t.s * t.s * t.s;
  t.c = y[1] + y[2] * z / t.s - t.jets.g.d1 * y[0] - t.jets.k.d1;
  t.c_z = y[2] / s3 - t.jets.g.d2 * y[0] - t.jets.k.d2;
  return t;
}

HjTerms hj_terms(const GeneratorPair& gen, const ParamPoint& y, double z) {
  if (!(std::abs(z) < 1.0)) fail(ErrorCode::DomainError, "phase parameter must satisfy |z| < 1");
  return hj_terms(gen, y, z, std::sqrt((1.0 - z) * (1.0 + z)));
}

HjTerms hj_terms_angle(const GeneratorPair& gen, const ParamPoint& y, double theta) {
  const double s = std::cos(theta);
  if (!(s > 0.0)) fail(ErrorCode::DomainError, "phase angle must satisfy |theta| < pi/2");
  return hj_terms(gen, y, std::sin(theta), s);
}

Vec3 add_scaled(const Vec3& a, double c, const Vec3& b) {
  return {a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]};
}

}  // namespace

namespace {

BranchedSample uv_from_terms(const GeneratorPair& gen, const SpacetimePoint& x, const PhaseTerms& t) {
  const double z = t.z;
  const Jet2& g = t.jets.g;
  const double gp = g.d1;
  if (std::abs(gp) < kMinGPrimeAtRoot) {
    fail(ErrorCode::DegenerateGenerator, "g'(z) too small at root z = " + format_real(z));
  }
  if (std::abs(t.f_z) < kCausticThreshold) {
    fail(ErrorCode::CausticPoint, "dF/dz vanishes at root z = " + format_real(z));
  }
  const double s = t.s;
  const double p = profile_p(t.jets, z);
  const double p_z = profile_p_prime(t.jets, z);
  const double r = profile_r(gen, z);
  const double r_z = profile_r_prime(t.jets, z);

  BranchedSample out;
  out.x = x;
  out.z = z;
  out.phase_dz = t.f_z;
  out.u = t.a / gp;
  out.v = g.val * x[2] / s + p * out.u + r;

  // Implicit differentiation: d/dx = ∂/∂x|_z + (∂/∂z)(∂z/∂x), ∂z/∂x = −F_x / F_z.
  const double ratio = g.val / gp;
  const Vec3 f_x{1.0, -z + ratio, s + ratio * z / s};
  const Vec3 z_x{-f_x[0] / t.f_z, -f_x[1] / t.f_z, -f_x[2] / t.f_z};

  const Vec3 u_x_fixed{0.0, 1.0 / gp, z / (s * gp)};
  const double u_z = (t.a_z * gp - t.a * g.d2) / (gp * gp);
  out.grad_u = add_scaled(u_x_fixed, u_z, z_x);

  const Vec3 v_x_fixed{0.0, p * u_x_fixed[1], g.val / s + p * u_x_fixed[2]};
  const double v_z = gp * x[2] / s + g.val * x[2] * z / (s * s * s) + p_z * out.u + p * u_z + r_z;
  out.grad_v = add_scaled(v_x_fixed, v_z, z_x);

  out.residuals = {minkowski(out.grad_u, out.grad_u), minkowski(out.grad_v, out.grad_v),
                   minkowski(out.grad_u, out.grad_v) - 1.0};
  return out;
}

}  // namespace

BranchedSample eval_uv_at_root(const GeneratorPair& gen, const SpacetimePoint& x, double z) {
  return uv_from_terms(gen, x, phase_terms(gen, x, z));
}

BranchedSample eval_uv_at_angle(const GeneratorPair& gen, const SpacetimePoint& x, double theta) {
  return uv_from_terms(gen, x, phase_terms_angle(gen, x, theta));
}

BranchedSample eval_uv(const GeneratorPair& gen, const SpacetimePoint& x, Branch branch, const RootOptions& opts) {
  const RootScan scan = solve_z(gen, x, opts);
  const std::size_t i = index_of(scan.roots, branch.pick(scan.roots));
  BranchedSample out = eval_uv_at_angle(gen, x, scan.angles[i]);
  out.branch = i;
  return out;
}

std::pair<Vec3, Vec3> grad_uv(const GeneratorPair& gen, const SpacetimePoint& x, Branch branch,
                              const RootOptions& opts) {
  const BranchedSample s = eval_uv(gen, x, branch, opts);
  return {s.grad_u, s.grad_v};
}

RootScan solve_hj_z(const GeneratorPair& gen, const ParamPoint& y, const RootOptions& opts) {
  if (!all_finite(y)) fail(ErrorCode::InvalidArgument, "parameter point must be finite");
  PhaseFunction phase;
  phase.f_df = [&](double theta, double& f, double& df) {
    const HjTerms t = hj_terms_angle(gen, y, theta);
    f = t.c;
    df = t.c_z * t.s;
  };
  return scan_phase_roots(phase, opts);
}

namespace {

HjSample hj_from_terms(const GeneratorPair& gen, const ParamPoint& y, const HjTerms& t) {
  const double z = t.z;
  if (std::abs(t.c_z) < kCausticThreshold) {
    fail(ErrorCode::CausticPoint, "constraint derivative vanishes at z = " + format_real(z));
  }
  const Jet2& g = t.jets.g;
  const Jet2& k = t.jets.k;
  const double s = t.s;
  const double p = profile_p(t.jets, z);

  HjSample out;
  out.y = y;
  out.z = z;
  out.w = y[1] * z - y[2] * s - g.val * y[0] - k.val;
  out.v = g.val * y[2] / s + p * y[0] + profile_r(gen, z);

  // ∂w/∂z is the constraint itself, so w's gradient has no z contribution.
  out.grad_w = {-g.val, z, -s};
  const Vec3 z_y{g.d1 / t.c_z, -1.0 / t.c_z, -(z / s) / t.c_z};
  const double v_z = g.d1 * y[2] / s + g.val * y[2] * z / (s * s * s) + profile_p_prime(t.jets, z) * y[0] +
                     profile_r_prime(t.jets, z);
  out.grad_v = add_scaled(Vec3{p, 0.0, g.val / s}, v_z, z_y);

  const Vec3& w = out.grad_w;
  const Vec3& v = out.grad_v;
  out.residuals = {w[1] * w[1] + w[2] * w[2] - 1.0, v[1] * v[1] + v[2] * v[2] - 2.0 * v[0],
                   v[1] * w[1] + v[2] * w[2] - w[0]};
  return out;
}

}  // namespace

HjSample eval_hj_at_root(const GeneratorPair& gen, const ParamPoint& y, double z) {
  return hj_from_terms(gen, y, hj_terms(gen, y, z));
}

HjSample eval_hj_at_angle(const GeneratorPair& gen, const ParamPoint& y, double theta) {
  return hj_from_terms(gen, y, hj_terms_angle(gen, y, theta));
}

HjSample eval_hj(const GeneratorPair& gen, const ParamPoint& y, Branch branch, const RootOptions& opts) {
  const RootScan scan = solve_hj_z(gen, y, opts);
  const std::size_t i = index_of(scan.roots, branch.pick(scan.roots));
  HjSample out = eval_hj_at_angle(gen, y, scan.angles[i]);
  out.branch = i;
  return out;
}

double track_hj_root_angle(const GeneratorPair& gen, const ParamPoint& y, double theta_hint,
                           const RootOptions& opts, double max_shift) {
  const double hi = angle_limit(opts);
  const double lo = -hi;
  const double z_hint = std::sin(theta_hint);
  const auto c_dc = [&](double theta, double& c, double& dc) {
    const HjTerms t = hj_terms_angle(gen, y, theta);
    c = t.c;
    dc = t.c_z * t.s;
  };
  auto within = [&](double theta) {
    return theta >= lo && theta <= hi && std::abs(std::sin(theta) - z_hint) <= max_shift;
  };
  double theta = theta_hint;
  try {
    for (int it = 0; it < 60; ++it) {
      double c = 0.0, dc = 0.0;
      c_dc(theta, c, dc);
      if (std::abs(c) <= opts.root_tol || dc == 0.0) break;
      const double next = theta - c / dc;
      if (!within(next) || next == theta) break;
      theta = next;
    }
    double c = 0.0, dc = 0.0;
    c_dc(theta, c, dc);
    if (std::abs(c) <= 10.0 * opts.root_tol && within(theta)) return polish_root(c_dc, theta, lo, hi);
  } catch (const Error&) {
  }
  const RootScan scan = solve_hj_z(gen, y, opts);
  double best = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.roots.size(); ++i) {
    if (std::abs(scan.roots[i] - z_hint) < best_dist) {
      best = scan.angles[i];
      best_dist = std::abs(scan.roots[i] - z_hint);
    }
  }
  if (best_dist > max_shift) fail(ErrorCode::NoRoot, "no constraint root near the tracked branch");
  return best;
}

double track_hj_root(const GeneratorPair& gen, const ParamPoint& y, double z_hint, const RootOptions& opts,
                     double max_shift) {
  if (!(std::abs(z_hint) < 1.0)) fail(ErrorCode::DomainError, "root hint must satisfy |z| < 1");
  return std::sin(track_hj_root_angle(gen, y, std::asin(z_hint), opts, max_shift));
}

std::pair<ScalarField, ScalarField> solution_fields(const GeneratorPair& gen, double z_hint,
                                                    const RootOptions& opts) {
  if (!(std::abs(z_hint) < 1.0)) fail(ErrorCode::DomainError, "root hint must satisfy |z| < 1");
  auto sample = [gen, theta_hint = std::asin(z_hint), opts](const Vec3& x) {
    return eval_uv_at_angle(gen, x, track_root_angle(gen, x, theta_hint, opts));
  };
  ScalarField u;
  u.eval = [sample](const Vec3& x) { return sample(x).u; };
  u.gradient = [sample](const Vec3& x) { return sample(x).grad_u; };
  ScalarField v;
  v.eval = [sample](const Vec3& x) { return sample(x).v; };
  v.gradient = [sample](const Vec3& x) { return sample(x).grad_v; };
  return {std::move(u), std::move(v)};
}

std::pair<ScalarField, ScalarField> hj_fields(const GeneratorPair& gen, double z_hint, const RootOptions& opts) {
  if (!(std::abs(z_hint) < 1.0)) fail(ErrorCode::DomainError, "root hint must satisfy |z| < 1");
  auto sample = [gen, theta_hint = std::asin(z_hint), opts](const Vec3& y) {
    return eval_hj_at_angle(gen, y, track_hj_root_angle(gen, y, theta_hint, opts));
  };
  ScalarField w;
  w.eval = [sample](const Vec3& y) { return sample(y).w; };
  w.gradient = [sample](const Vec3& y) { return sample(y).grad_w; };
  ScalarField v;
  v.eval = [sample](const Vec3& y) { return sample(y).v; };
  v.gradient = [sample](const Vec3& y) { return sample(y).grad_v; };
  return {std::move(w), std::move(v)};
}

}  // namespace eik
