#pragma once

#include <functional>
#include <vector>

namespace eik {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Newton's method confined to [lo, hi], where f(lo) and f(hi) have opposite
/// signs. Steps that leave the bracket or fail to halve the previous step
/// fall back to bisection. Stops when |f| <= f_tol or the bracket can no
/// longer be split in floating point.
RootResult safeguarded_newton(const std::function<void(double, double&, double&)>& f_df, double lo,
                              double hi, double f_tol, int max_iter = 200);

/// Derivative-free variant: Illinois false position with bisection fallback.
RootResult bracketed_secant(const std::function<double(double)>& f, double lo, double hi, double f_tol,
                            int max_iter = 300);

struct Bracket {
  double lo;
  double hi;
};

struct SignScan {
  std::vector<Bracket> brackets;  // cells with a strict sign change
  std::vector<double> node_roots;  // scan nodes where f is exactly 0
  int failed_nodes = 0;            // nodes where f threw or was not finite
  bool near_zero_everywhere = false;
};

/// Evaluate f at cells+1 uniform nodes on [lo, hi] and collect sign changes.
/// `zero_tol` sets the near_zero_everywhere flag (|f| < zero_tol at all nodes).
SignScan scan_sign_changes(const std::function<double(double)>& f, double lo, double hi, int cells,
                           double zero_tol);

}  // namespace eik
