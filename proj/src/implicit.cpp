#include "eikonal/implicit.hpp"

#include <algorithm>
#include <cmath>

#include "eikonal/rootfind.hpp"

namespace eik {

void RootOptions::validate() const {
  if (!(z_margin > 0.0 && z_margin < 1.0)) fail(ErrorCode::InvalidArgument, "z_margin must lie in (0, 1)");
  if (scan_cells < 2) fail(ErrorCode::InvalidArgument, "scan_cells must be at least 2");
  if (!(root_tol > 0.0)) fail(ErrorCode::InvalidArgument, "root_tol must be positive");
  if (max_roots < 1) fail(ErrorCode::InvalidArgument, "max_roots must be at least 1");
}

namespace {

PhaseTerms terms_at(const GeneratorPair& gen, const SpacetimePoint& x, double z, double s) {
  PhaseTerms t;
  t.z = z;
  t.jets = gen.jets(z);
  const Jet2& g = t.jets.g;
  const Jet2& k = t.jets.k;
  if (std::abs(g.d1) < kDegenerateGPrime) {
    fail(ErrorCode::DegenerateGenerator, "g'(z) vanishes at z = " + format_real(z));
  }
  t.s = s;
  const double s3 = s * s * s;
  t.a = x[1] + x[2] * z / s - k.d1;
  t.a_z = x[2] / s3 - k.d2;
  const double ratio = g.val / g.d1;
  const double ratio_z = 1.0 - g.val * g.d2 / (g.d1 * g.d1);
  t.f = x[0] - x[1] * z + x[2] * s + ratio * t.a + k.val;
  t.f_z = -x[1] - x[2] * z / s + ratio_z * t.a + ratio * t.a_z + k.d1;
  return t;
}

}  // namespace

PhaseTerms phase_terms(const GeneratorPair& gen, const SpacetimePoint& x, double z) {
  if (!(std::abs(z) < 1.0)) fail(ErrorCode::DomainError, "phase parameter must satisfy |z| < 1");
  return terms_at(gen, x, z, std::sqrt((1.0 - z) * (1.0 + z)));
}

PhaseTerms phase_terms_angle(const GeneratorPair& gen, const SpacetimePoint& x, double theta) {
  const double s = std::cos(theta);
  if (!(s > 0.0)) fail(ErrorCode::DomainError, "phase angle must satisfy |theta| < pi/2");
  return terms_at(gen, x, std::sin(theta), s);
}

double angle_limit(const RootOptions& opts) {
  const double z_max = 1.0 - opts.z_margin;
  double limit = std::asin(z_max);
  while (std::sin(limit) > z_max) limit = std::nextafter(limit, 0.0);
  return limit;
}

double phase_residual(const GeneratorPair& gen, const SpacetimePoint& x, double z) {
  return phase_terms(gen, x, z).f;
}

double phase_residual_dz(const GeneratorPair& gen, const SpacetimePoint& x, double z) {
  return phase_terms(gen, x, z).f_z;
}

double Branch::pick(const std::vector<double>& roots) const {
  if (roots.empty()) fail(ErrorCode::NoRoot, "phase equation has no root at this point");
  if (is_nearest_zero()) {
    // Ties (z and -z) resolve to the lower root.
    return *std::min_element(roots.begin(), roots.end(),
                             [](double a, double b) { return std::abs(a) < std::abs(b); });
  }
  if (index_ >= roots.size()) {
    fail(ErrorCode::NoRoot, "branch " + std::to_string(index_) + " requested but only " +
                                std::to_string(roots.size()) + " root(s) exist");
  }
  return roots[index_];
}

std::string Branch::describe() const {
  return is_nearest_zero() ? std::string("nearest-zero") : std::to_string(index_);
}

double polish_root(const std::function<void(double, double&, double&)>& f_df, double z, double lo, double hi) {
  double f = 0.0, df = 0.0;
  f_df(z, f, df);
  for (int it = 0; it < 8 && f != 0.0 && df != 0.0; ++it) {
    const double next = z - f / df;
    if (!(next >= lo && next <= hi) || next == z) break;
    double f_next = 0.0, df_next = 0.0;
    f_df(next, f_next, df_next);
    if (!(std::abs(f_next) < std::abs(f))) break;
    z = next;
    f = f_next;
    df = df_next;
  }
  return z;
}

RootScan scan_phase_roots(const PhaseFunction& phase, const RootOptions& opts) {
  opts.validate();
  const double hi = angle_limit(opts);
  const double lo = -hi;
  const auto n_nodes = static_cast<std::size_t>(opts.scan_cells) + 1;

  struct Node {
    double theta = 0.0;
    double f = 0.0;
    std::optional<ErrorCode> error;
  };
  std::vector<Node> nodes(n_nodes);
  bool all_small = true;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    Node& node = nodes[i];
    node.theta = (i + 1 == n_nodes) ? hi : lo + (hi - lo) * static_cast<double>(i) / opts.scan_cells;
    try {
      double d = 0.0;
      phase.f_df(node.theta, node.f, d);
      if (!std::isfinite(node.f)) node.error = ErrorCode::DomainError;
    } catch (const Error& e) {
      node.error = e.code();
    }
    if (node.error || std::abs(node.f) >= opts.root_tol) all_small = false;
  }
  if (all_small) {
    fail(ErrorCode::DegenerateManifold, "phase residual vanishes identically on the scan");
  }

  RootScan out;
  std::vector<double> found;
  const double accept_tol = 10.0 * opts.root_tol;
  for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    const double za = std::sin(a.theta);
    const double zb = std::sin(b.theta);
    if (a.error || b.error) {
      out.skipped.push_back({za, zb, a.error ? *a.error : *b.error});
      continue;
    }
    if (a.f == 0.0) found.push_back(a.theta);
    if (i + 2 == n_nodes && b.f == 0.0) found.push_back(b.theta);
    const bool sign_change = (a.f < 0.0 && b.f > 0.0) || (a.f > 0.0 && b.f < 0.0);
    if (!sign_change) continue;
    if (phase.cell_guard) {
      if (auto reason = phase.cell_guard(za, zb)) {
        out.skipped.push_back({za, zb, *reason});
        continue;
      }
    }
    try {
      const RootResult r = safeguarded_newton(phase.f_df, a.theta, b.theta, opts.root_tol);
      if (std::abs(r.fx) <= accept_tol) {
        found.push_back(polish_root(phase.f_df, r.x, a.theta, b.theta));
      } else {
        out.skipped.push_back({za, zb, ErrorCode::NoRoot});
      }
    } catch (const Error& e) {
      out.skipped.push_back({za, zb, e.code()});
    }
  }

  std::sort(found.begin(), found.end());
  for (double theta : found) {
    if (out.angles.empty() || theta - out.angles.back() > 1e-12) {
      out.angles.push_back(theta);
      out.roots.push_back(std::sin(theta));
    }
  }
  if (out.roots.size() > static_cast<std::size_t>(opts.max_roots)) {
    out.roots.resize(static_cast<std::size_t>(opts.max_roots));
    out.angles.resize(static_cast<std::size_t>(opts.max_roots));
    out.truncated = true;
  }
  return out;
}

RootScan solve_z(const GeneratorPair& gen, const SpacetimePoint& x, const RootOptions& opts) {
  if (!all_finite(x)) fail(ErrorCode::InvalidArgument, "spacetime point must be finite");
  PhaseFunction phase;
  phase.f_df = [&](double theta, double& f, double& df) {
    const PhaseTerms t = phase_terms_angle(gen, x, theta);
    f = t.f;
    df = t.f_z * t.s;
  };
  // g' changing sign inside a cell means F passes through a pole there.
  phase.cell_guard = [&](double a, double b) -> std::optional<ErrorCode> {
    const double ga = gen.g().eval_jet2(a).d1;
    const double gb = gen.g().eval_jet2(b).d1;
    if ((ga > 0.0) != (gb > 0.0)) return ErrorCode::DegenerateGenerator;
    return std::nullopt;
  };
  return scan_phase_roots(phase, opts);
}

double track_root_angle(const GeneratorPair& gen, const SpacetimePoint& x, double theta_hint,
                        const RootOptions& opts, double max_shift) {
  const double hi = angle_limit(opts);
  const double lo = -hi;
  const double z_hint = std::sin(theta_hint);
  const auto f_df = [&](double theta, double& f, double& df) {
    const PhaseTerms t = phase_terms_angle(gen, x, theta);
    f = t.f;
    df = t.f_z * t.s;
  };
  auto within = [&](double theta) {
    return theta >= lo && theta <= hi && std::abs(std::sin(theta) - z_hint) <= max_shift;
  };
  double theta = theta_hint;
  try {
    for (int it = 0; it < 60; ++it) {
      double f = 0.0, df = 0.0;
      f_df(theta, f, df);
      if (std::abs(f) <= opts.root_tol || df == 0.0) break;
      const double next = theta - f / df;
      if (!within(next) || next == theta) break;
      theta = next;
    }
    double f = 0.0, df = 0.0;
    f_df(theta, f, df);
    if (std::abs(f) <= 10.0 * opts.root_tol && within(theta)) {
      return polish_root(f_df, theta, lo, hi);
    }
  } catch (const Error&) {
    // fall through to the full scan
  }

  const RootScan scan = solve_z(gen, x, opts);
  double best = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scan.roots.size(); ++i) {
    if (std::abs(scan.roots[i] - z_hint) < best_dist) {
      best = scan.angles[i];
      best_dist = std::abs(scan.roots[i] - z_hint);
    }
  }
  if (best_dist > max_shift) fail(ErrorCode::NoRoot, "no root near the tracked branch");
  return best;
}

double track_root(const GeneratorPair& gen, const SpacetimePoint& x, double z_hint, const RootOptions& opts,
                  double max_shift) {
  if (!(std::abs(z_hint) < 1.0)) fail(ErrorCode::DomainError, "root hint must satisfy |z| < 1");
  return std::sin(track_root_angle(gen, x, std::asin(z_hint), opts, max_shift));
}

}  // namespace eik
