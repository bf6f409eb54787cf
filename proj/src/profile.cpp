#include "eikonal/profile.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include "eikonal/error.hpp"

namespace eik {
namespace {

// Spacing of the memoised anchor lattice z_ref + j * kAnchorStep.
constexpr double kAnchorStep = 1.0 / 16.0;

void require_open_unit(double z, const char* what) {
  if (!(std::abs(z) < 1.0)) fail(ErrorCode::DomainError, std::string(what) + " requires |z| < 1, got " + format_real(z));
}

struct SimpsonState {
  const std::function<double(double)>& f;
  long budget;
  long used = 0;
};

double simpson_recurse(SimpsonState& st, double a, double fa, double m, double fm, double b, double fb,
                       double whole, double tol) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  if (!(lm > a && lm < m && rm > m && rm < b)) {
    fail(ErrorCode::QuadratureFailure, "interval collapsed near " + format_real(m));
  }
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  st.used += 1;  // one interval became two
  if (st.used > st.budget) fail(ErrorCode::QuadratureFailure, "subdivision budget exhausted");
  return simpson_recurse(st, a, fa, lm, flm, m, fm, left, 0.5 * tol) +
         simpson_recurse(st, m, fm, rm, frm, b, fb, right, 0.5 * tol);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        long max_subintervals) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, abs_tol, max_subintervals);
  if (!(abs_tol > 0.0)) fail(ErrorCode::InvalidArgument, "quadrature tolerance must be positive");
  SimpsonState st{f, max_subintervals};
  st.used = 1;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(st, a, fa, m, fm, b, fb, whole, abs_tol);
}

struct GeneratorPair::Memo {
  std::mutex mutex;
  std::vector<double> up;    // up[i]   = r(z_ref + (i+1) * step)
  std::vector<double> down;  // down[i] = r(z_ref - (i+1) * step)
};

GeneratorPair::GeneratorPair(AnalyticFunction g, AnalyticFunction k, double z_ref, double quad_tol)
    : g_(std::move(g)), k_(std::move(k)), z_ref_(z_ref), quad_tol_(quad_tol), memo_(std::make_shared<Memo>()) {
  if (!(std::abs(z_ref) < 1.0)) fail(ErrorCode::InvalidArgument, "z_ref must lie in (-1, 1)");
  if (!(quad_tol > 0.0)) fail(ErrorCode::InvalidArgument, "quad_tol must be positive");
}

GeneratorPair GeneratorPair::parse(std::string_view g, std::string_view k, double z_ref, double quad_tol) {
  return GeneratorPair(AnalyticFunction::parse(g), AnalyticFunction::parse(k), z_ref, quad_tol);
}

double profile_p(const GeneratorJets& j, double z) {
  const double gp = j.g.d1;
  const double t = j.g.val - z * gp;
  return 0.5 * (-gp * gp + t * t);
}

double profile_p_prime(const GeneratorJets& j, double z) {
  return j.g.d2 * ((z * z - 1.0) * j.g.d1 - z * j.g.val);
}

double profile_r_prime(const GeneratorJets& j, double z) {
  return -j.k.d2 * (z * j.g.val + (1.0 - z * z) * j.g.d1);
}

double profile_p(const GeneratorPair& gen, double z) {
  require_open_unit(z, "profile_p");
  return profile_p(GeneratorJets{gen.g().eval_jet2(z), {}}, z);
}

double profile_p_prime(const GeneratorPair& gen, double z) {
  require_open_unit(z, "profile_p_prime");
  return profile_p_prime(GeneratorJets{gen.g().eval_jet2(z), {}}, z);
}

double profile_r_prime(const GeneratorPair& gen, double z) {
  require_open_unit(z, "profile_r_prime");
  return profile_r_prime(gen.jets(z), z);
}

double profile_r(const GeneratorPair& gen, double z) {
  require_open_unit(z, "profile_r");
  const auto integrand = [&gen](double s) { return profile_r_prime(gen.jets(s), s); };
  const double z_ref = gen.z_ref();
  const double tol_density = 0.5 * gen.quad_tol();  // tolerance per unit length, total length < 2

  // Anchor index toward z_ref so the whole path stays between z_ref and z.
  const double offset = (z - z_ref) / kAnchorStep;
  const long j = static_cast<long>(std::trunc(offset));
  auto anchor = [&](long i) { return z_ref + static_cast<double>(i) * kAnchorStep; };

  double base = 0.0;
  if (j != 0) {
    GeneratorPair::Memo& memo = *gen.memo_;
    std::lock_guard lock(memo.mutex);
    std::vector<double>& lane = j > 0 ? memo.up : memo.down;
    const long dir = j > 0 ? 1 : -1;
    const auto need = static_cast<std::size_t>(std::labs(j));
    while (lane.size() < need) {
      const long i = static_cast<long>(lane.size());
      const double prev = i == 0 ? 0.0 : lane.back();
      const double a = anchor(dir * i);
      const double b = anchor(dir * (i + 1));
      lane.push_back(prev + adaptive_simpson(integrand, a, b, tol_density * kAnchorStep));
    }
    base = lane[need - 1];
  }
  const double a = anchor(j);
  return base + adaptive_simpson(integrand, a, z, tol_density * std::max(std::abs(z - a), 1e-300));
}

}  // namespace eik
