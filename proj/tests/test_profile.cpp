#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "eikonal/error.hpp"
#include "eikonal/fixtures.hpp"
#include "eikonal/profile.hpp"

using namespace eik;

TEST_CASE("p for simple generators") {
  const auto lin = GeneratorPair::parse("z", "0");
  const auto one = GeneratorPair::parse("1", "0");
  for (double z : {-0.9, -0.3, 0.0, 0.4, 0.99}) {
    CHECK(profile_p(lin, z) == doctest::Approx(-0.5));
    CHECK(profile_p(one, z) == doctest::Approx(0.5));
    CHECK(profile_p_prime(lin, z) == 0.0);
  }
}

TEST_CASE("p' hand value") {
  CHECK(profile_p_prime(GeneratorPair::parse("z^2", "0"), 0.5) == doctest::Approx(-1.75));
}

TEST_CASE("r' for affine and cubic k") {
  const auto affine = GeneratorPair::parse("z^2+2", "3-0.5*z");
  const auto cubic = GeneratorPair::parse("z", "z^3");
  for (double z : {-0.8, -0.1, 0.0, 0.6}) {
    CHECK(profile_r_prime(affine, z) == 0.0);
    CHECK(profile_r(affine, z) == 0.0);
    CHECK(profile_r_prime(cubic, z) == doctest::Approx(-6 * z));
  }
}

TEST_CASE("r for k = z^3 is -3z^2") {
  const auto gen = GeneratorPair::parse("z", "z^3");
  CHECK(std::abs(profile_r(gen, 0.5) + 0.75) <= 1e-9);
  CHECK(profile_r(gen, 0.0) == 0.0);
  for (int i = 0; i < 50; ++i) {
    const double z = -0.98 + 1.96 * i / 49.0;
    CHECK(std::abs(profile_r(gen, z) + 3 * z * z) <= 1e-9);
  }
}

TEST_CASE("r vanishes at a shifted anchor") {
  const auto gen = GeneratorPair::parse("z", "z^3", 0.3);
  CHECK(profile_r(gen, 0.3) == 0.0);
  CHECK(std::abs(profile_r(gen, 0.5) - (-0.75 + 0.27)) <= 1e-9);
}

TEST_CASE("profile functions reject |z| >= 1") {
  const auto gen = GeneratorPair::parse("z", "z^3");
  CHECK_THROWS_AS(profile_r(gen, 1.0), Error);
  CHECK_THROWS_AS(profile_p(gen, -1.0), Error);
}

TEST_CASE("random pairs: algebraic forms agree and derivatives match differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> at(-0.9, 0.9);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GeneratorPair gen = fixtures::random_polynomial_pair(seed);
    for (int i = 0; i < 50; ++i) {
      const double z = at(rng);
      const auto j = gen.jets(z);
      const double g = j.g.val, g1 = j.g.d1;
      CHECK(std::abs(profile_p(gen, z) - 0.5 * (g * g - 2 * z * g * g1 + (z * z - 1) * g1 * g1)) <= 1e-11);
      CHECK(std::abs(profile_r_prime(gen, z) - (-j.k.d2 * (z * g + (1 - z * z) * g1))) <= 1e-11);
    }
    const double z = at(rng);
    const double h = 1e-4;
    const double fd_p = (profile_p(gen, z + h) - profile_p(gen, z - h)) / (2 * h);
    CHECK(std::abs(fd_p - profile_p_prime(gen, z)) <= 1e-6);
    const double hr = 1e-5;
    const double fd_r = (profile_r(gen, z + hr) - profile_r(gen, z - hr)) / (2 * hr);
    CHECK(std::abs(fd_r - profile_r_prime(gen, z)) <= 1e-6);
  }
}

TEST_CASE("r is additive against a fine composite Simpson oracle") {
  const GeneratorPair gen = fixtures::random_polynomial_pair(7);
  const double a = -0.7, b = 0.85;
  const int n = 20000;
  double sum = profile_r_prime(gen, a) + profile_r_prime(gen, b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * profile_r_prime(gen, a + (b - a) * i / n);
  const double oracle = sum * (b - a) / (3.0 * n);
  CHECK(std::abs(profile_r(gen, b) - profile_r(gen, a) - oracle) <= 10 * gen.quad_tol());
}

TEST_CASE("r does not depend on call order or thread") {
  const GeneratorPair fresh_a = fixtures::random_polynomial_pair(9);
  const GeneratorPair fresh_b = fixtures::random_polynomial_pair(9);
  std::vector<double> zs;
  for (int i = 0; i < 64; ++i) zs.push_back(-0.95 + 1.9 * ((i * 37) % 64) / 63.0);
  std::vector<double> forward(zs.size()), threaded(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) forward[i] = profile_r(fresh_a, zs[i]);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = zs.size(); i-- > 0;) {
        if (static_cast<int>(i % 4) == t) threaded[i] = profile_r(fresh_b, zs[i]);
      }
    });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(forward[i] == threaded[i]);
}

TEST_CASE("adaptive simpson") {
  CHECK(std::abs(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12) - (M_E - 1)) <= 1e-12);
  CHECK(std::abs(adaptive_simpson([](double x) { return std::cos(x); }, 1.0, 0.0, 1e-12) + std::sin(1.0)) <= 1e-12);
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, 1e-14, 64), Error);
}
