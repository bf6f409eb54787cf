#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "eikonal/field.hpp"

namespace eik {

enum class GradientMode { Analytic, FiniteDifference };

std::string to_string(GradientMode mode);

inline constexpr double kDefaultFdStep = 1e-5;

/// Sup-norm summary of equation defects over a point set. Points whose
/// evaluation throws are counted in n_failed (by reason) and excluded.
struct ResidualReport {
  std::string system;  // "eik2" or "eik4"
  std::size_t n_points = 0;
  std::size_t n_failed = 0;
  double sup_e1 = 0.0;
  double sup_e2 = 0.0;
  double sup_e3 = 0.0;
  std::optional<Vec3> worst_point;
  std::optional<std::size_t> worst_index;
  GradientMode gradient_mode = GradientMode::Analytic;
  double fd_step = kDefaultFdStep;
  std::map<std::string, std::size_t> failures;

  double sup() const { return std::max({sup_e1, sup_e2, sup_e3}); }
};

nlohmann::json to_json(const ResidualReport& report);

/// Central differences with per-axis step h·(1 + |p_i|).
/// Throws DomainError when any stencil point fails to evaluate.
Vec3 fd_gradient(const ScalarField& f, const Vec3& p, double h = kDefaultFdStep);

/// (a·a, b·b, a·b − 1) under the (+,−,−) product.
Vec3 eik2_defects(const Vec3& grad_u, const Vec3& grad_v);

/// (w₁² + w₂² − 1, v₁² + v₂² − 2v₀, v₁w₁ + v₂w₂ − w₀).
Vec3 eik4_defects(const Vec3& grad_w, const Vec3& grad_v);

struct FieldPair {
  ScalarField first;
  ScalarField second;
};

/// Fields chosen per sample (index into the point list), e.g. a solution
/// branch tracked from that sample's root. May throw eik::Error.
using FieldFactory = std::function<FieldPair(std::size_t index, const Vec3& point)>;

ResidualReport residual_eik2(const ScalarField& u, const ScalarField& v, std::span<const Vec3> points,
                             GradientMode mode, double fd_step = kDefaultFdStep);
ResidualReport residual_eik2(const FieldFactory& fields, std::span<const Vec3> points, GradientMode mode,
                             double fd_step = kDefaultFdStep);

ResidualReport residual_eik4(const ScalarField& w, const ScalarField& v, std::span<const Vec3> points,
                             GradientMode mode, double fd_step = kDefaultFdStep);
ResidualReport residual_eik4(const FieldFactory& fields, std::span<const Vec3> points, GradientMode mode,
                             double fd_step = kDefaultFdStep);

}  // namespace eik
