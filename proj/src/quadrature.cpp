#include "jigsaw/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "jigsaw/error.hpp"

namespace jigsaw::theory {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  const QuadratureSpec& spec;
  std::size_t evaluations = 0;
  double error = 0.0;
  bool failed = false;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth <= 0 || evaluations >= spec.max_evaluations) {
      failed = true;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

QuadratureResult simpson(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
  Simpson s{f, spec};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = s.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = std::max(spec.abs_tol, spec.rel_tol * std::abs(whole));
  // A coarse first pass guards against a lucky agreement on the initial
  // three nodes; the first few levels are always refined.
  double value = 0.0;
  constexpr int kPieces = 8;
  double prev_x = a;
  double prev_f = fa;
  for (int i = 1; i <= kPieces; ++i) {
    const double x = (i == kPieces) ? b : a + (b - a) * i / kPieces;
    const double fx = (i == kPieces) ? fb : s.eval(x);
    const double mid = 0.5 * (prev_x + x);
    const double fmid = s.eval(mid);
    const double piece = (x - prev_x) / 6.0 * (prev_f + 4.0 * fmid + fx);
    value += s.recurse(prev_x, x, prev_f, fmid, fx, piece, eps / kPieces, spec.max_depth);
    prev_x = x;
    prev_f = fx;
  }
  QuadratureResult r{value, s.error, s.evaluations};
  if (s.failed || !std::isfinite(value)) {
    throw ConvergenceError("integrate: tolerance not reached within budget", value, s.error);
  }
  return r;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
  if (!(a < b)) throw UsageError("integrate: need a < b");
  if (spec.endpoint == EndpointMode::None) return simpson(f, a, b, spec);
  const double width = b - a;
  const std::function<double(double)> g = [&](double s) {
    const double e = std::exp(s);
    return f(a + width * e) * width * e;
  };
  return simpson(g, spec.s_min, 0.0, spec);
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a, const QuadratureSpec& spec) {
  double b = a + 1.0;
  while (f(b) >= spec.tail_cutoff) {
    b = a + 2.0 * (b - a);
    if (b - a > 1e6) throw ConvergenceError("integrate_to_infinity: integrand does not decay", 0.0, 0.0);
  }
  return integrate(f, a, b, spec);
}

MinimumResult golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(a < b)) throw UsageError("golden_section_minimize: need a < b");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a;
  double hi = b;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  MinimumResult best{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  for (double x : {a, b}) {
    const double fx = f(x);
    if (fx < best.value) best = {x, fx};
  }
  return best;
}

}  // namespace jigsaw::theory
