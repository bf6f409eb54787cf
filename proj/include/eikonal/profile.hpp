#pragma once

#include <functional>
#include <memory>
#include <string_view>

#include "eikonal/jet.hpp"
#include "eikonal/scalarfun.hpp"

namespace eik {

/// Jets of both generators at one parameter value.
struct GeneratorJets {
  Jet2 g;
  Jet2 k;
};

/// The two free functions g, k of the general solution, plus the anchor at
/// which the profile r is pinned to zero.
///
/// Copies share one memo of partial r integrals; the memo is internally
/// synchronised and its contents depend only on (g, k, z_ref, quad_tol), so
/// profile_r returns identical bits regardless of call order or thread.
class GeneratorPair {
 public:
  static constexpr double kDefaultQuadTol = 1e-12;

  GeneratorPair(AnalyticFunction g, AnalyticFunction k, double z_ref = 0.0,
                double quad_tol = kDefaultQuadTol);

  static GeneratorPair parse(std::string_view g, std::string_view k, double z_ref = 0.0,
                             double quad_tol = kDefaultQuadTol);

  const AnalyticFunction& g() const noexcept { return g_; }
  const AnalyticFunction& k() const noexcept { return k_; }
  double z_ref() const noexcept { return z_ref_; }
  double quad_tol() const noexcept { return quad_tol_; }

  GeneratorJets jets(double z) const { return {g_.eval_jet2(z), k_.eval_jet2(z)}; }

 private:
  friend double profile_r(const GeneratorPair&, double);
  struct Memo;

  AnalyticFunction g_;
  AnalyticFunction k_;
  double z_ref_;
  double quad_tol_;
  std::shared_ptr<Memo> memo_;
};

/// p = ½(−g′² + (g − z g′)²).
double profile_p(const GeneratorPair& gen, double z);

/// p′ = g″((z² − 1)g′ − z g).
double profile_p_prime(const GeneratorPair& gen, double z);

/// r′ = −k″(z g + (1 − z²) g′).
double profile_r_prime(const GeneratorPair& gen, double z);

/// r(z) = ∫ r′ from z_ref to z, to absolute tolerance quad_tol.
/// Throws DomainError for |z| >= 1 and QuadratureFailure.
double profile_r(const GeneratorPair& gen, double z);

/// Value-only helpers over already evaluated jets.
double profile_p(const GeneratorJets& j, double z);
double profile_p_prime(const GeneratorJets& j, double z);
double profile_r_prime(const GeneratorJets& j, double z);

/// Adaptive Simpson on [a, b] (a > b allowed) with Richardson correction.
/// Throws QuadratureFailure when more than `max_subintervals` would be needed.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        long max_subintervals = 1L << 20);

}  // namespace eik
