#include "eikonal/rootfind.hpp"

#include <cmath>
#include <utility>

#include "eikonal/error.hpp"

namespace eik {
namespace {

bool splittable(double a, double b) {
  const double mid = 0.5 * (a + b);
  return mid != a && mid != b;
}

}  // namespace

RootResult safeguarded_newton(const std::function<void(double, double&, double&)>& f_df, double lo,
                              double hi, double f_tol, int max_iter) {
  double f_lo = 0.0, d = 0.0, f_hi = 0.0;
  f_df(lo, f_lo, d);
  f_df(hi, f_hi, d);
  if (std::abs(f_lo) <= f_tol) return {lo, f_lo, 0, true};
  if (std::abs(f_hi) <= f_tol) return {hi, f_hi, 0, true};
  if ((f_lo > 0.0) == (f_hi > 0.0)) fail(ErrorCode::NoRoot, "interval does not bracket a root");

  // Orient so that f(neg) < 0 < f(pos).
  double neg = lo, pos = hi;
  if (f_lo > 0.0) std::swap(neg, pos);

  double x = 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  double f = 0.0, df = 0.0;
  f_df(x, f, df);
  RootResult best{x, f, 0, false};

  for (int it = 1; it <= max_iter; ++it) {
    if (std::abs(f) < std::abs(best.fx)) best = {x, f, it, false};
    if (std::abs(f) <= f_tol) return {x, f, it, true};
    if (f < 0.0) {
      neg = x;
    } else {
      pos = x;
    }
    if (!splittable(neg, pos)) {
      best.iterations = it;
      best.converged = std::abs(best.fx) <= f_tol;
      return best;
    }

    const bool newton_ok = df != 0.0 && std::isfinite(df) &&
                           ((x - pos) * df - f) * ((x - neg) * df - f) < 0.0 &&
                           std::abs(2.0 * f) <= std::abs(dx_old * df);
    dx_old = dx;
    if (newton_ok) {
      dx = f / df;
      const double next = x - dx;
      if (next == x) {
        best.iterations = it;
        best.converged = std::abs(best.fx) <= f_tol;
        return best;
      }
      x = next;
    } else {
      dx = 0.5 * (pos - neg);
      x = neg + dx;
    }
    f_df(x, f, df);
  }
  best.iterations = max_iter;
  return best;
}

RootResult bracketed_secant(const std::function<double(double)>& f, double lo, double hi, double f_tol,
                            int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (std::abs(fa) <= f_tol) return {a, fa, 0, true};
  if (std::abs(fb) <= f_tol) return {b, fb, 0, true};
  if ((fa > 0.0) == (fb > 0.0)) fail(ErrorCode::NoRoot, "interval does not bracket a root");

  int side = 0;
  RootResult best = std::abs(fa) < std::abs(fb) ? RootResult{a, fa, 0, false} : RootResult{b, fb, 0, false};
  for (int it = 1; it <= max_iter; ++it) {
    if (!splittable(a, b)) break;
    double c = (a * fb - b * fa) / (fb - fa);
    // Keep false position honest: fall back to bisection near the ends.
    const double w = b - a;
    if (!(c > a + 1e-3 * w && c < b - 1e-3 * w)) c = 0.5 * (a + b);
    const double fc = f(c);
    if (std::abs(fc) < std::abs(best.fx)) best = {c, fc, it, false};
    if (std::abs(fc) <= f_tol) return {c, fc, it, true};
    if ((fc > 0.0) == (fb > 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
    best.iterations = it;
  }
  best.converged = std::abs(best.fx) <= f_tol;
  return best;
}

SignScan scan_sign_changes(const std::function<double(double)>& f, double lo, double hi, int cells,
                           double zero_tol) {
  if (cells < 2 || !(hi > lo)) fail(ErrorCode::InvalidArgument, "scan needs hi > lo and at least 2 cells");
  SignScan scan;
  std::vector<double> xs(static_cast<std::size_t>(cells) + 1);
  std::vector<double> fs(xs.size());
  std::vector<bool> ok(xs.size(), false);
  bool all_small = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (i + 1 == xs.size()) ? hi : lo + (hi - lo) * static_cast<double>(i) / cells;
    try {
      fs[i] = f(xs[i]);
      ok[i] = std::isfinite(fs[i]);
    } catch (const Error&) {
      ok[i] = false;
    }
    if (!ok[i]) {
      ++scan.failed_nodes;
      all_small = false;
      continue;
    }
    if (std::abs(fs[i]) >= zero_tol) all_small = false;
    if (fs[i] == 0.0) scan.node_roots.push_back(xs[i]);
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!ok[i] || !ok[i + 1]) continue;
    if ((fs[i] < 0.0 && fs[i + 1] > 0.0) || (fs[i] > 0.0 && fs[i + 1] < 0.0)) {
      scan.brackets.push_back({xs[i], xs[i + 1]});
    }
  }
  scan.near_zero_everywhere = all_small && scan.failed_nodes == 0;
  return scan;
}

}  // namespace eik
