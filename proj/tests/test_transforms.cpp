#include <doctest.h>

#include <cmath>
#include <random>

#include "eikonal/error.hpp"
#include "eikonal/fixtures.hpp"
#include "eikonal/solution.hpp"
#include "eikonal/transforms.hpp"
#include "eikonal/verify.hpp"

using namespace eik;

namespace {

ScalarField field(std::function<double(const Vec3&)> f, std::function<Vec3(const Vec3&)> g = {}) {
  ScalarField s;
  s.eval = std::move(f);
  s.gradient = std::move(g);
  s.domain_hint = {{-10, -10, -10}, {10, 10, 10}};
  return s;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an eik::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("hodograph of linear fields") {
  const auto u = field([](const Vec3& x) { return x[0] - x[1]; });
  const auto v = field([](const Vec3& x) { return 0.5 * (x[0] + x[1]); });
  const ParamPoint y{0.7, -1.3, 2.0};
  const HodographValue hv = hodograph_forward(u, v, y);
  CHECK(hv.w == doctest::Approx(y[0] + y[1]).epsilon(1e-12));
  CHECK(hv.v == doctest::Approx(0.5 * y[0] + y[1]).epsilon(1e-12));
  const auto u2 = field([](const Vec3& x) { return 2 * (x[0] + x[1]); });
  CHECK(hodograph_w(u2, y) == doctest::Approx(y[0] / 2 - y[1]).epsilon(1e-12));
  const auto flat = field([](const Vec3& x) { return x[1]; });
  const ErrorCode c = code_of([&] { hodograph_w(flat, y); });
  CHECK((c == ErrorCode::NonMonotone || c == ErrorCode::NoRoot));
}

TEST_CASE("hodograph derivative relations") {
  const auto u = field([](const Vec3& x) { return x[0] - x[1]; });
  const auto w = field([](const Vec3& y) { return y[0] + y[1]; });
  CHECK(hodograph_derivative_check(u, w, {0.3, 0.2, -0.5}).max() <= 1e-7);
  const auto u2 = field([](const Vec3& x) { return 2 * (x[0] + x[1]); });
  const auto w2 = field([](const Vec3& y) { return y[0] / 2 - y[1]; });
  CHECK(hodograph_derivative_check(u2, w2, {1, -1, 0.5}).max() <= 1e-9);
  const ScalarField m = fixtures::monotone_u();
  const ScalarField mw = hodograph_field(m, {{-20, -10, -10}, {20, 10, 10}});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  for (int i = 0; i < 10; ++i) {
    const SpacetimePoint x{c(rng), c(rng), c(rng)};
    CHECK(hodograph_derivative_check(m, mw, x, 1e-4).max() <= 1e-5);
  }
}

TEST_CASE("hodograph round trip on a monotone field") {
  const ScalarField u = fixtures::monotone_u();
  const ScalarField w = hodograph_field(u, {{-20, -10, -10}, {20, 10, 10}});
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> c(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const SpacetimePoint x{c(rng), c(rng), c(rng)};
    CHECK(std::abs(hodograph_inverse(w, x) - u(x)) <= 1e-8);
  }
}

TEST_CASE("Legendre transform examples") {
  const auto half_sq = field([](const Vec3& y) { return 0.5 * y[1] * y[1]; },
                             [](const Vec3& y) { return Vec3{0, y[1], 0}; });
  const LegendreValue h = legendre_forward(half_sq, {0.4, 1.3, -2});
  CHECK(h.value == doctest::Approx(0.5 * 1.69).epsilon(1e-10));
  const auto shifted = field([](const Vec3& y) { return 0.5 * y[1] * y[1] + y[0]; },
                             [](const Vec3& y) { return Vec3{1, y[1], 0}; });
  CHECK(legendre_forward(shifted, {0.4, 1.3, -2}).value == doctest::Approx(0.5 * 1.69 - 0.4).epsilon(1e-10));
  CHECK(legendre_inverse(half_sq, {0.1, -0.7, 3}).value == doctest::Approx(0.245).epsilon(1e-10));
  CHECK(code_of([] { legendre_forward(fixtures::linear_w(), {0, 3, 0}); }) == ErrorCode::FlatDirection);
}

TEST_CASE("Legendre involution on a convex fixture") {
  const ScalarField w = fixtures::convex_w();
  const ScalarField h = legendre_field(w, {{-10, -8, -10}, {10, 8, 10}});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> c(-1.5, 1.5);
  for (int i = 0; i < 30; ++i) {
    const ParamPoint y{c(rng), c(rng), c(rng)};
    CHECK(std::abs(legendre_inverse(h, y).value - w(y)) <= 1e-9);
  }
}

TEST_CASE("H and its derivatives") {
  const auto gen = GeneratorPair::parse("z", "0");
  const HDerivatives d = build_H(gen, {0, 0.6, 1});
  CHECK(d.h == doctest::Approx(0.8));
  CHECK(d.h_z1 == doctest::Approx(-0.75));
  CHECK(d.h_z2 == doctest::Approx(0.8));
  CHECK(d.h_z1z1 == doctest::Approx(-1.953125));
  CHECK(0.6 * d.h_z1 - d.h == doctest::Approx(-1.25));
  CHECK(build_H(gen, {3, 0.6, -7}).h_z2 == doctest::Approx(0.8));
  CHECK_THROWS_AS(build_H(gen, {0, 1, 0}), Error);
}

TEST_CASE("H derivatives match differences") {
  const GeneratorPair gen = fixtures::random_polynomial_pair(5);
  const ParamPoint z{0.3, -0.4, 0.8};
  const double e = 1e-5;
  auto at = [&](double a, double b, double c) { return build_H(gen, {a, b, c}); };
  const HDerivatives d = at(z[0], z[1], z[2]);
  auto diff = [&](int axis, auto pick) {
    ParamPoint p = z, m = z;
    p[axis] += e;
    m[axis] -= e;
    return (pick(at(p[0], p[1], p[2])) - pick(at(m[0], m[1], m[2]))) / (2 * e);
  };
  auto H = [](const HDerivatives& h) { return h.h; };
  auto H1 = [](const HDerivatives& h) { return h.h_z1; };
  auto H0 = [](const HDerivatives& h) { return h.h_z0; };
  CHECK(std::abs(diff(0, H) - d.h_z0) <= 1e-6);
  CHECK(std::abs(diff(1, H) - d.h_z1) <= 1e-6);
  CHECK(std::abs(diff(2, H) - d.h_z2) <= 1e-6);
  CHECK(std::abs(diff(1, H1) - d.h_z1z1) <= 1e-6);
  CHECK(std::abs(diff(2, H1) - d.h_z1z2) <= 1e-6);
  CHECK(std::abs(diff(1, H0) - d.h_z0z1) <= 1e-6);
  CHECK(std::abs(diff(0, H0) - d.h_z0z0) <= 1e-6);
}

TEST_CASE("contact second derivatives match the HJ form") {
  const GeneratorPair gen = fixtures::random_polynomial_pair(3);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(-1, 1);
  int checked = 0;
  for (int i = 0; i < 40 && checked < 8; ++i) {
    const ParamPoint y{c(rng), c(rng), c(rng)};
    for (double z : solve_hj_z(gen, y).roots) {
      HjSample s;
      try {
        s = eval_hj_at_root(gen, y, z);
      } catch (const Error&) {
        continue;
      }
      const HDerivatives d = build_H(gen, {y[0], z, y[2]});
      if (std::abs(d.h_z1z1) < 0.1) continue;
      const WSecondDerivatives w2 = contact_second_derivatives(d);
      const ScalarField w = hj_fields(gen, z).first;
      const double h = 1e-6;
      auto dgrad = [&](int axis) {
        ParamPoint p = y, m = y;
        p[axis] += h;
        m[axis] -= h;
        const Vec3 a = w.gradient(p), b = w.gradient(m);
        return Vec3{(a[0] - b[0]) / (2 * h), (a[1] - b[1]) / (2 * h), (a[2] - b[2]) / (2 * h)};
      };
      const Vec3 d1 = dgrad(1), d2 = dgrad(2);
      CHECK(std::abs(d1[1] - w2.w_y1y1) <= 1e-5 * (1 + std::abs(w2.w_y1y1)));
      CHECK(std::abs(d2[1] - w2.w_y1y2) <= 1e-5 * (1 + std::abs(w2.w_y1y2)));
      CHECK(std::abs(d1[0] - w2.w_y0y1) <= 1e-5 * (1 + std::abs(w2.w_y0y1)));
      CHECK(std::abs(d2[0] - w2.w_y0y2) <= 1e-5 * (1 + std::abs(w2.w_y0y2)));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("reduction conditions") {
  const auto lin = GeneratorPair::parse("z", "0");
  for (double z1 : {-0.9, 0.0, 0.5}) {
    const auto [a, b] = check_reduction_conditions(lin, z1);
    CHECK(a == 0.0);
    CHECK(b == 0.0);
  }
  const auto [a, b] = check_reduction_conditions(GeneratorPair::parse("z^2+1", "z^3"), 0.3);
  CHECK(a <= 1e-12);
  CHECK(b <= 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> at(-0.999, 0.999);
  const GeneratorPair gen = fixtures::random_polynomial_pair(13);
  for (int i = 0; i < 1000; ++i) {
    const auto [x, y] = check_reduction_conditions(gen, at(rng));
    CHECK(x <= 1e-11);
    CHECK(y <= 1e-11);
  }
}

TEST_CASE("pipeline closure") {
  const auto gen = GeneratorPair::parse("z", "0");
  for (std::size_t b : {0u, 1u}) {
    const ChainDefects d = pipeline_closure(gen, {-2, 7, 1}, Branch::index(b));
    CHECK(d.max() <= 1e-7);
  }
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> c(-1, 1);
  int closed = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeneratorPair g = fixtures::random_polynomial_pair(seed);
    for (int i = 0; i < 10; ++i) {
      const SpacetimePoint x{c(rng), c(rng), c(rng)};
      const auto roots = solve_z(g, x).roots;
      for (std::size_t b = 0; b < roots.size(); ++b) {
        try {
          CHECK(pipeline_closure(g, x, Branch::index(b)).max() <= 1e-7);
          ++closed;
        } catch (const Error&) {
        }
      }
    }
  }
  CHECK(closed > 5);
}
