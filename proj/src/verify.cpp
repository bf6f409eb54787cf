#include "eikonal/verify.hpp"

#include <cmath>

#include "eikonal/error.hpp"
#include "eikonal/parallel.hpp"

namespace eik {
namespace {

using Defects = Vec3 (*)(const Vec3&, const Vec3&);

struct PointOutcome {
  std::optional<Vec3> defects;
  ErrorCode error = ErrorCode::InvalidArgument;
};

Vec3 gradient_of(const ScalarField& f, const Vec3& p, GradientMode mode, double h) {
  if (mode == GradientMode::Analytic) {
    if (!f.has_gradient()) fail(ErrorCode::InvalidArgument, "analytic mode needs fields with gradients");
    const Vec3 g = f.gradient(p);
    if (!all_finite(g)) fail(ErrorCode::DomainError, "non-finite analytic gradient");
    return g;
  }
  return fd_gradient(f, p, h);
}

ResidualReport run(const char* system, const FieldFactory& fields, std::span<const Vec3> points,
                   GradientMode mode, double fd_step, Defects defects) {
  if (mode == GradientMode::FiniteDifference && !(fd_step > 0.0)) {
    fail(ErrorCode::InvalidArgument, "fd_step must be positive");
  }
  std::vector<PointOutcome> outcomes(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Vec3& p = points[i];
    try {
      if (!all_finite(p)) fail(ErrorCode::InvalidArgument, "non-finite point");
      const FieldPair f = fields(i, p);
      const Vec3 ga = gradient_of(f.first, p, mode, fd_step);
      const Vec3 gb = gradient_of(f.second, p, mode, fd_step);
      const Vec3 d = defects(ga, gb);
      if (!all_finite(d)) fail(ErrorCode::DomainError, "non-finite residual");
      outcomes[i].defects = d;
    } catch (const Error& e) {
      outcomes[i].error = e.code();
    }
  });

  ResidualReport report;
  report.system = system;
  report.n_points = points.size();
  report.gradient_mode = mode;
  report.fd_step = fd_step;
  double worst = -1.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const PointOutcome& o = outcomes[i];
    if (!o.defects) {
      ++report.n_failed;
      ++report.failures[std::string(to_string(o.error))];
      continue;
    }
    const Vec3 d{std::abs((*o.defects)[0]), std::abs((*o.defects)[1]), std::abs((*o.defects)[2])};
    report.sup_e1 = std::max(report.sup_e1, d[0]);
    report.sup_e2 = std::max(report.sup_e2, d[1]);
    report.sup_e3 = std::max(report.sup_e3, d[2]);
    const double m = std::max({d[0], d[1], d[2]});
    if (m > worst) {
      worst = m;
      report.worst_point = points[i];
      report.worst_index = i;
    }
  }
  return report;
}

FieldFactory constant_fields(const ScalarField& a, const ScalarField& b) {
  return [a, b](std::size_t, const Vec3&) { return FieldPair{a, b}; };
}

}  // namespace

std::string to_string(GradientMode mode) {
  return mode == GradientMode::Analytic ? "analytic" : "finite_difference";
}

Vec3 fd_gradient(const ScalarField& f, const Vec3& p, double h) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "fd step must be positive");
  Vec3 out{};
  for (int i = 0; i < 3; ++i) {
    const double step = h * (1.0 + std::abs(p[i]));
    Vec3 plus = p, minus = p;
    plus[i] += step;
    minus[i] -= step;
    double fp = 0.0, fm = 0.0;
    try {
      fp = f(plus);
      fm = f(minus);
    } catch (const Error& e) {
      fail(ErrorCode::DomainError, std::string("stencil evaluation failed (") + e.what() + ")");
    }
    if (!std::isfinite(fp) || !std::isfinite(fm)) fail(ErrorCode::DomainError, "non-finite stencil value");
    // Divide by the realised step so rounding in p ± step does not bias the quotient.
    out[i] = (fp - fm) / (plus[i] - minus[i]);
  }
  return out;
}

Vec3 eik2_defects(const Vec3& gu, const Vec3& gv) {
  return {minkowski(gu, gu), minkowski(gv, gv), minkowski(gu, gv) - 1.0};
}

Vec3 eik4_defects(const Vec3& gw, const Vec3& gv) {
  return {gw[1] * gw[1] + gw[2] * gw[2] - 1.0, gv[1] * gv[1] + gv[2] * gv[2] - 2.0 * gv[0],
          gv[1] * gw[1] + gv[2] * gw[2] - gw[0]};
}

ResidualReport residual_eik2(const ScalarField& u, const ScalarField& v, std::span<const Vec3> points,
                             GradientMode mode, double fd_step) {
  return run("eik2", constant_fields(u, v), points, mode, fd_step, &eik2_defects);
}

ResidualReport residual_eik2(const FieldFactory& fields, std::span<const Vec3> points, GradientMode mode,
                             double fd_step) {
  return run("eik2", fields, points, mode, fd_step, &eik2_defects);
}

ResidualReport residual_eik4(const ScalarField& w, const ScalarField& v, std::span<const Vec3> points,
                             GradientMode mode, double fd_step) {
  return run("eik4", constant_fields(w, v), points, mode, fd_step, &eik4_defects);
}

ResidualReport residual_eik4(const FieldFactory& fields, std::span<const Vec3> points, GradientMode mode,
                             double fd_step) {
  return run("eik4", fields, points, mode, fd_step, &eik4_defects);
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["system"] = r.system;
  j["n_points"] = r.n_points;
  j["n_failed"] = r.n_failed;
  j["sup_e1"] = r.sup_e1;
  j["sup_e2"] = r.sup_e2;
  j["sup_e3"] = r.sup_e3;
  j["worst_point"] = r.worst_point ? nlohmann::json(*r.worst_point) : nlohmann::json(nullptr);
  j["gradient_mode"] = to_string(r.gradient_mode);
  j["fd_step"] = r.fd_step;
  j["failures"] = r.failures;
  return j;
}

}  // namespace eik
