#include "eikonal/fixtures.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "eikonal/error.hpp"
#include "eikonal/scalarfun.hpp"

namespace eik::fixtures {
namespace {

ScalarField field(std::function<double(const Vec3&)> f, std::function<Vec3(const Vec3&)> grad) {
  ScalarField s;
  s.eval = std::move(f);
  s.gradient = std::move(grad);
  s.domain_hint = Box{{-10.0, -10.0, -10.0}, {10.0, 10.0, 10.0}};
  return s;
}

}  // namespace

FieldPair linear_1d(double a, int sigma, double c1, double c2) {
  if (a == 0.0) fail(ErrorCode::InvalidArgument, "linear family needs a != 0");
  const double s = sigma >= 0 ? 1.0 : -1.0;
  const double b = 1.0 / (2.0 * a);
  return {field([=](const Vec3& x) { return a * (x[0] + s * x[1]) + c1; },
                [=](const Vec3&) { return Vec3{a, a * s, 0.0}; }),
          field([=](const Vec3& x) { return b * (x[0] - s * x[1]) + c2; },
                [=](const Vec3&) { return Vec3{b, -b * s, 0.0}; })};
}

FieldPair broken() {
  auto x0 = field([](const Vec3& x) { return x[0]; }, [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; });
  return {x0, x0};
}

FieldPair flat_hj() {
  return {field([](const Vec3& y) { return y[0] + y[1]; }, [](const Vec3&) { return Vec3{1.0, 1.0, 0.0}; }),
          field([](const Vec3& y) { return 0.5 * y[0] + y[1]; }, [](const Vec3&) { return Vec3{0.5, 1.0, 0.0}; })};
}

ScalarField convex_w() {
  return field([](const Vec3& y) { return 0.5 * y[1] * y[1] + 0.25 * y[0] * y[1] + 0.2 * y[2] * y[1] - y[0]; },
               [](const Vec3& y) {
                 return Vec3{0.25 * y[1] - 1.0, y[1] + 0.25 * y[0] + 0.2 * y[2], 0.2 * y[1]};
               });
}

ScalarField linear_w() {
  return field([](const Vec3& y) { return 3.0 * y[1] - y[0]; }, [](const Vec3&) { return Vec3{-1.0, 3.0, 0.0}; });
}

ScalarField monotone_u() {
  return field([](const Vec3& x) { return x[0] + 0.2 * std::sin(x[0]) + 0.5 * x[1] * x[2]; },
               [](const Vec3& x) { return Vec3{1.0 + 0.2 * std::cos(x[0]), 0.5 * x[2], 0.5 * x[1]}; });
}

GeneratorPair random_polynomial_pair(std::uint64_t seed, int degree) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> g(static_cast<std::size_t>(degree) + 1);
  std::vector<double> k(g.size());
  for (double& c : g) c = coef(rng);
  for (double& c : k) c = coef(rng);
  return GeneratorPair::parse(polynomial_expression(g), polynomial_expression(k));
}

}  // namespace eik::fixtures
