#pragma once

#include <cstdint>

#include "eikonal/field.hpp"
#include "eikonal/profile.hpp"
#include "eikonal/verify.hpp"

namespace eik::fixtures {

/// u = a(x0 + σx1) + c1, v = (x0 − σx1)/(2a) + c2 with σ = ±1; an exact
/// solution of the coupled system for any a ≠ 0.
FieldPair linear_1d(double a, int sigma = 1, double c1 = 0.0, double c2 = 0.0);

/// u = v = x0; violates u·u = 0 by exactly 1.
FieldPair broken();

/// (w, v) = (y0 + y1, y0/2 + y1); satisfies the Hamilton–Jacobi system exactly.
FieldPair flat_hj();

/// w = y1²/2 + y0 y1/4 + y2 y1/5 − y0; strictly convex in y1 (w_{y1y1} = 1).
ScalarField convex_w();

/// w = 3y1 − y0; linear in y1.
ScalarField linear_w();

/// u = x0 + sin(x0)/5 + x1 x2/2, strictly increasing in x0.
ScalarField monotone_u();

/// Polynomials g, k of the given degree, coefficients uniform in [−1, 1].
GeneratorPair random_polynomial_pair(std::uint64_t seed, int degree = 4);

}  // namespace eik::fixtures
