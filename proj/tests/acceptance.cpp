// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "eikonal/error.hpp"
#include "eikonal/fixtures.hpp"
#include "eikonal/profile.hpp"
#include "eikonal/solution.hpp"
#include "eikonal/transforms.hpp"
#include "eikonal/verify.hpp"

using namespace eik;

namespace {

constexpr std::uint64_t kEnsembleSeed = 20240601;
constexpr int kPairs = 20;
constexpr int kSamplesPerPair = 100;
constexpr int kDrawPerPair = 150;
constexpr double kMinGPrime = 0.1;
constexpr double kConditioningGate = 1.0;

int failures = 0;
bool saw_nan = false;

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string reasons(const ResidualReport& r) {
  std::string out;
  for (const auto& [k, n] : r.failures) out += fmt(" %s=%zu", k.c_str(), n);
  return out.empty() ? " none" : out;
}

void note_finite(double v) {
  if (!std::isfinite(v)) saw_nan = true;
}

void note_finite(const Vec3& v) {
  for (double c : v) note_finite(c);
}

/// One successfully evaluated (point, branch) sample of the ensemble.
struct Sample {
  std::size_t pair;
  BranchedSample s;
  double c_z;  // dC/dz of the HJ constraint at the matched point
};

struct Ensemble {
  std::vector<GeneratorPair> pairs;
  std::vector<Sample> samples;
  std::vector<std::size_t> per_pair;
};

double constraint_dz(const GeneratorPair& gen, const ParamPoint& y, double z) {
  const auto j = gen.jets(z);
  const double s = std::sqrt(1 - z * z);
  return y[2] / (s * s * s) - j.g.d2 * y[0] - j.k.d2;
}

Ensemble build_ensemble() {
  Ensemble e;
  std::mt19937_64 rng(kEnsembleSeed);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int p = 0; p < kPairs; ++p) {
    e.pairs.push_back(fixtures::random_polynomial_pair(kEnsembleSeed + static_cast<std::uint64_t>(p)));
    const GeneratorPair& gen = e.pairs.back();
    std::size_t got = 0;
    for (int attempt = 0; attempt < 20000 && got < kDrawPerPair; ++attempt) {
      const SpacetimePoint x{c(rng), c(rng), c(rng)};
      RootScan scan;
      try {
        scan = solve_z(gen, x);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t b = 0; b < scan.roots.size(); ++b) {
        const double z = scan.roots[b];
        if (std::abs(gen.jets(z).g.d1) < kMinGPrime) continue;
        try {
          BranchedSample s = eval_uv_at_root(gen, x, z);
          s.branch = b;
          const double cz = constraint_dz(gen, {s.u, x[1], x[2]}, z);
          e.samples.push_back({static_cast<std::size_t>(p), s, cz});
          ++got;
        } catch (const Error&) {
        }
      }
    }
    e.per_pair.push_back(got);
  }
  return e;
}

/// FD residuals over the chosen samples, run pair by pair so that the number
/// of samples actually evaluated can be checked per pair.
struct FdOutcome {
  ResidualReport merged;
  std::size_t min_evaluated = 0;
};

FdOutcome fd_by_pair(const Ensemble& e, const std::vector<std::size_t>& chosen, bool hj) {
  FdOutcome out;
  out.min_evaluated = std::numeric_limits<std::size_t>::max();
  for (std::size_t p = 0; p < e.pairs.size(); ++p) {
    std::vector<std::size_t> idx;
    std::vector<Vec3> pts;
    for (std::size_t i : chosen) {
      const Sample& s = e.samples[i];
      if (s.pair != p) continue;
      idx.push_back(i);
      pts.push_back(hj ? Vec3{s.s.u, s.s.x[1], s.s.x[2]} : s.s.x);
    }
    const FieldFactory make = [&](std::size_t i, const Vec3&) {
      const Sample& s = e.samples[idx[i]];
      auto [a, b] = hj ? hj_fields(e.pairs[p], s.s.z) : solution_fields(e.pairs[p], s.s.z);
      return FieldPair{a, b};
    };
    const ResidualReport r = hj ? residual_eik4(make, pts, GradientMode::FiniteDifference, 1e-5)
                                : residual_eik2(make, pts, GradientMode::FiniteDifference, 1e-5);
    out.merged.n_points += r.n_points;
    out.merged.n_failed += r.n_failed;
    out.merged.sup_e1 = std::max(out.merged.sup_e1, r.sup_e1);
    out.merged.sup_e2 = std::max(out.merged.sup_e2, r.sup_e2);
    out.merged.sup_e3 = std::max(out.merged.sup_e3, r.sup_e3);
    for (const auto& [k, n] : r.failures) out.merged.failures[k] += n;
    out.min_evaluated = std::min(out.min_evaluated, pts.size() - r.n_failed);
  }
  return out;
}

void criterion_1(const Ensemble& e, double build_seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  double sup_an = 0.0;
  std::vector<std::size_t> all, gated;
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    const Sample& s = e.samples[i];
    note_finite(s.s.residuals);
    for (double r : s.s.residuals) sup_an = std::max(sup_an, std::abs(r));
    all.push_back(i);
    if (std::abs(s.s.phase_dz) >= kConditioningGate) gated.push_back(i);
  }
  const FdOutcome fd = fd_by_pair(e, gated, false);
  const double seconds =
      build_seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const FdOutcome fd_all = fd_by_pair(e, all, false);

  std::size_t min_per_pair = e.per_pair.empty() ? 0 : e.per_pair.front();
  for (std::size_t n : e.per_pair) min_per_pair = std::min(min_per_pair, n);
  const bool pass = min_per_pair >= kSamplesPerPair && fd.min_evaluated >= kSamplesPerPair && sup_an <= 1e-7 &&
                    fd.merged.sup() <= 1e-4 && seconds <= 30.0;
  report(1, pass,
         fmt("residual suite: %zu samples (min %zu per pair), analytic sup %.3e (<= 1e-7); "
             "FD sup %.3e (<= 1e-4) with |dF/dz| >= %.0f on %zu samples (min %zu per pair), %zu excluded (%s); "
             "unfiltered FD sup %.3e on %zu samples; %.2f s single-threaded (<= 30 s)",
             e.samples.size(), min_per_pair, sup_an, fd.merged.sup(), kConditioningGate,
             gated.size() - fd.merged.n_failed, fd.min_evaluated, fd.merged.n_failed, reasons(fd.merged).c_str(),
             fd_all.merged.sup(), all.size() - fd_all.merged.n_failed, seconds));
}

void criterion_2() {
  std::vector<Vec3> pts;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(-5, 5);
  for (int i = 0; i < 200; ++i) pts.push_back({c(rng), c(rng), c(rng)});
  double sup = 0.0;
  for (double a : {2.0, -2.0, 0.5, -0.5, 1.0}) {
    for (int sigma : {1, -1}) {
      const FieldPair f = fixtures::linear_1d(a, sigma, 0.7, -1.3);
      sup = std::max(sup, residual_eik2(f.first, f.second, pts, GradientMode::Analytic).sup());
    }
  }
  report(2, sup == 0.0, fmt("1D family, a in {+-2, +-0.5, 1}, both signs: sup %.3e (exact zero)", sup));
}

void criterion_3() {
  const auto gen = GeneratorPair::parse("z", "0");
  const BranchedSample s = eval_uv(gen, {-2, 7, 1}, Branch::index(1));
  const double r3 = std::sqrt(3.0);
  const double dz = std::abs(s.z - r3 / 2), du = std::abs(s.u - (7 + r3)), dv = std::abs(s.v - (r3 / 2 - 3.5));
  note_finite(s.u);
  note_finite(s.v);
  report(3, std::max({dz, du, dv}) <= 1e-10,
         fmt("known point: |dz| %.1e, |du| %.1e, |dv| %.1e (<= 1e-10)", dz, du, dv));
}

void criterion_4(const Ensemble& e) {
  std::vector<std::size_t> all, gated;
  double consistency = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    const Sample& s = e.samples[i];
    const ParamPoint y{s.s.u, s.s.x[1], s.s.x[2]};
    try {
      const HjSample h = eval_hj_at_root(e.pairs[s.pair], y, s.s.z);
      note_finite(h.v);
      note_finite(h.w);
      consistency = std::max({consistency, std::abs(h.v - s.s.v), std::abs(h.w - s.s.x[0])});
      ++matched;
    } catch (const Error&) {
      continue;
    }
    all.push_back(i);
    if (std::abs(s.c_z) >= kConditioningGate) gated.push_back(i);
  }
  const FdOutcome fd = fd_by_pair(e, gated, true);
  const FdOutcome fd_all = fd_by_pair(e, all, true);
  const bool pass = fd.min_evaluated >= kSamplesPerPair && fd.merged.sup() <= 1e-4 && consistency <= 1e-8;
  report(4, pass,
         fmt("HJ system: FD sup %.3e (<= 1e-4) with |dC/dz| >= %.0f on %zu samples (min %zu per pair), "
             "%zu excluded (%s); unfiltered FD sup %.3e on %zu samples; "
             "matched-point consistency %.3e (<= 1e-8) on %zu samples",
             fd.merged.sup(), kConditioningGate, gated.size() - fd.merged.n_failed, fd.min_evaluated,
             fd.merged.n_failed, reasons(fd.merged).c_str(), fd_all.merged.sup(), all.size() - fd_all.merged.n_failed,
             consistency, matched));
}

void criterion_5(const Ensemble& e) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> at(-0.999, 0.999);
  double sup_a = 0.0, sup_b = 0.0;
  for (const GeneratorPair& gen : e.pairs) {
    for (int i = 0; i < 1000; ++i) {
      const auto [a, b] = check_reduction_conditions(gen, at(rng));
      note_finite(a);
      note_finite(b);
      sup_a = std::max(sup_a, a);
      sup_b = std::max(sup_b, b);
    }
  }
  report(5, std::max(sup_a, sup_b) <= 1e-11,
         fmt("reduction identities, %d pairs x 1000 z1: %.3e and %.3e (<= 1e-11)", kPairs, sup_a, sup_b));
}

void criterion_6() {
  const auto gen = GeneratorPair::parse("z", "z^3");
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> at(-0.99, 0.99);
  double sup = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double z = at(rng);
    const double r = profile_r(gen, z);
    note_finite(r);
    sup = std::max(sup, std::abs(r + 3 * z * z));
  }
  report(6, sup <= 1e-9, fmt("quadrature r vs -3z^2 at 100 samples: %.3e (<= 1e-9)", sup));
}

void criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> c(-1.5, 1.5);

  const ScalarField w = fixtures::convex_w();
  const ScalarField h = legendre_field(w, {{-10, -8, -10}, {10, 8, 10}});
  double involution = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ParamPoint y{c(rng), c(rng), c(rng)};
    const double back = legendre_inverse(h, y).value;
    note_finite(back);
    involution = std::max(involution, std::abs(back - w(y)));
  }

  const ScalarField u = fixtures::monotone_u();
  const ScalarField wy = hodograph_field(u, {{-20, -10, -10}, {20, 10, 10}});
  double round_trip = 0.0;
  for (int i = 0; i < 100; ++i) {
    const SpacetimePoint x{c(rng), c(rng), c(rng)};
    const double back = hodograph_inverse(wy, x);
    note_finite(back);
    round_trip = std::max(round_trip, std::abs(back - u(x)));
  }

  std::vector<GeneratorPair> gens{GeneratorPair::parse("z", "0")};
  for (std::uint64_t s = 1; s <= 5; ++s) gens.push_back(fixtures::random_polynomial_pair(100 + s));
  std::uniform_real_distribution<double> pc(-1, 1);
  double closure = 0.0;
  std::vector<std::size_t> closed(gens.size(), 0);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    std::vector<SpacetimePoint> pts;
    if (g == 0) pts = {{-2, 7, 1}, {-3, 6, 0.5}, {-1.5, 8, 1.2}, {-2.5, 7.5, 1.5}};
    for (int i = 0; i < 60; ++i) pts.push_back(g == 0 ? SpacetimePoint{-3 + pc(rng), 7 + pc(rng), 1 + 0.5 * pc(rng)}
                                                      : SpacetimePoint{pc(rng), pc(rng), pc(rng)});
    for (const SpacetimePoint& x : pts) {
      RootScan scan;
      try {
        scan = solve_z(gens[g], x);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t b = 0; b < scan.roots.size(); ++b) {
        try {
          const ChainDefects d = pipeline_closure(gens[g], x, Branch::index(b));
          note_finite(d.max());
          closure = std::max(closure, d.max());
          ++closed[g];
        } catch (const Error&) {
        }
      }
    }
  }
  bool all_closed = true;
  std::size_t min_closed = closed.front();
  for (std::size_t n : closed) {
    all_closed &= n > 0;
    min_closed = std::min(min_closed, n);
  }
  report(7, involution <= 1e-9 && round_trip <= 1e-8 && closure <= 1e-7 && all_closed,
         fmt("transform chain: Legendre involution %.3e (<= 1e-9); hodograph round trip %.3e (<= 1e-8); "
             "pipeline closure %.3e (<= 1e-7) over g=z,k=0 and 5 random pairs (min %zu samples per pair)",
             involution, round_trip, closure, min_closed));
}

void criterion_8() {
  struct Path {
    const char* name;
    ErrorCode expected;
    std::function<void()> run;
  };
  const auto lin = GeneratorPair::parse("z", "0");
  const std::vector<Path> paths{
      {"NoRoot", ErrorCode::NoRoot, [&] { eval_uv(lin, {-2, 0, 3}, Branch::nearest_zero()); }},
      {"DegenerateManifold", ErrorCode::DegenerateManifold, [&] { solve_z(lin, {0, 5, 0}); }},
      {"CausticPoint", ErrorCode::CausticPoint, [&] { eval_uv_at_root(lin, {-1, 0.5, 1}, 0.0); }},
      {"FlatDirection", ErrorCode::FlatDirection, [] { legendre_forward(fixtures::linear_w(), {0, 3, 0}); }},
      {"SyntaxError", ErrorCode::SyntaxError, [] { parse_function("z+*2"); }},
  };
  std::string detail;
  bool pass = true;
  for (const Path& p : paths) {
    bool fired = false;
    try {
      p.run();
    } catch (const Error& e) {
      fired = e.code() == p.expected;
    }
    pass &= fired;
    detail += fmt("%s %s; ", p.name, fired ? "fired" : "MISSING");
  }

  // Sweep points around the degenerate line and across random generators:
  // every call either returns finite values or throws.
  std::size_t returned = 0, thrown = 0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> c(-3, 3), tiny(-1e-6, 1e-6);
  for (int i = 0; i < 2000; ++i) {
    const GeneratorPair gen = i % 2 ? lin : fixtures::random_polynomial_pair(1 + i % 13);
    const SpacetimePoint x = i % 4 == 1 ? SpacetimePoint{tiny(rng), c(rng), tiny(rng)}
                                        : SpacetimePoint{c(rng), c(rng), c(rng)};
    try {
      const BranchedSample s = eval_uv(gen, x, Branch::nearest_zero());
      note_finite(s.u);
      note_finite(s.v);
      note_finite(s.grad_u);
      note_finite(s.grad_v);
      ++returned;
    } catch (const Error&) {
      ++thrown;
    }
    try {
      const HjSample h = eval_hj(gen, x, Branch::nearest_zero());
      note_finite(h.w);
      note_finite(h.v);
      note_finite(h.grad_w);
      note_finite(h.grad_v);
      ++returned;
    } catch (const Error&) {
      ++thrown;
    }
  }
  pass &= !saw_nan;
  detail += fmt("NaN sweep: %zu returned, %zu raised, %s", returned, thrown, saw_nan ? "NaN SEEN" : "no NaN");
  report(8, pass, "error paths: " + detail);
}

}  // namespace

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

int main() {
  // Criterion 1 states a single-core budget.
  setenv("EIKONAL_THREADS", "1", 1);
  const auto t0 = std::chrono::steady_clock::now();
  const Ensemble ensemble = build_ensemble();
  const double build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  criterion_1(ensemble, build_seconds);
  unsetenv("EIKONAL_THREADS");
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_2();
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_3();
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_4(ensemble);
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_5(ensemble);
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_6();
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_7();
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  {
    const auto t = std::chrono::steady_clock::now();
    criterion_8();
    std::fprintf(stderr, "  (%.2f s)\n", elapsed(t));
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
