#include "jigsaw/theory.hpp"

#include <cmath>

#include "jigsaw/error.hpp"
#include "jigsaw/special_functions.hpp"

namespace jigsaw::theory {

double g_sigma(int sigma, double x) {
  if (sigma < 1) throw UsageError("g_sigma: sigma must be >= 1");
  if (!(x > 0.0)) throw DomainError("g_sigma: requires x > 0");
  if (x < sigma + 1.0) {
    // P = e^{-x} x^sigma / sigma! * S with S = sum_j x^j sigma! / (sigma + j)!.
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 1000; ++j) {
      term *= x / (sigma + j);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return x - sigma * std::log(x) + log_factorial(sigma) - std::log(sum);
  }
  double q = 0.0;
  const double lx = std::log(x);
  for (int i = 0; i < sigma; ++i) q += std::exp(-x + i * lx - log_factorial(i));
  return -std::log1p(-q);
}

QuadratureResult lambda_sigma(int sigma, const QuadratureSpec& quad) {
  if (sigma < 1) throw UsageError("lambda_sigma: sigma must be >= 1");
  const auto f = [sigma](double x) { return g_sigma(sigma, x); };
  const double split = sigma;
  const auto head = integrate(f, 0.0, split, quad);
  QuadratureSpec tail_spec = quad;
  tail_spec.endpoint = EndpointMode::None;
  const auto tail = integrate_to_infinity(f, split, tail_spec);
  return {head.value + tail.value, head.error_estimate + tail.error_estimate, head.evaluations + tail.evaluations};
}

double nu_sigma(int sigma) {
  if (sigma < 1) throw UsageError("nu_sigma: sigma must be >= 1");
  const double m = 2.0 * sigma + 1.0;
  return std::exp(log_factorial(sigma) / m) * gamma_fn(1.0 / m) * zeta((m + 1.0) / m) / m;
}

QuadratureResult nu_sigma_quadrature(int sigma, const QuadratureSpec& quad) {
  if (sigma < 1) throw UsageError("nu_sigma_quadrature: sigma must be >= 1");
  const double m = 2.0 * sigma + 1.0;
  const double lf = log_factorial(sigma);
  const auto f = [m, lf](double x) { return g_sigma(1, std::exp(m * std::log(x) - lf)); };
  const auto head = integrate(f, 0.0, 1.0, quad);
  QuadratureSpec tail_spec = quad;
  tail_spec.endpoint = EndpointMode::None;
  const auto tail = integrate_to_infinity(f, 1.0, tail_spec);
  return {head.value + tail.value, head.error_estimate + tail.error_estimate, head.evaluations + tail.evaluations};
}

double lb2d_objective(double c, double lam, double alpha) {
  const double ac = alpha * c;
  return -ac * std::log(-std::expm1(-lam * ac)) - ac * std::log(4.65);
}

MinimumResult lb2d_infimum(double c, double lam) {
  if (!(c > 0.0) || !(lam > 0.0)) throw DomainError("lb2d_infimum: requires c > 0 and lam > 0");
  return golden_section_minimize([&](double a) { return lb2d_objective(c, lam, a); }, 1.0, 2.0);
}

QuadratureResult ub2d_bound(const Phi& phi, double p_site, const QuadratureSpec& quad) {
  if (!(p_site > 0.0 && p_site < 1.0)) throw DomainError("ub2d_bound: requires p_site in (0, 1)");
  const double kl = phi.spec().k + phi.spec().ell;
  const double r_max = -std::log1p(-p_site) / kl;
  const auto f = [&](double r) {
    const double q = -std::expm1(-kl * r);
    const double v = phi(q);
    if (!(v > 0.0)) throw DomainError("ub2d_bound: phi vanishes inside the integration domain");
    return -std::log(v);
  };
  auto res = integrate(f, 0.0, r_max, quad);
  res.value *= 0.5;
  res.error_estimate *= 0.5;
  return res;
}

double grow_lower_bound_theta2(int sigma, double p, int K) {
  if (sigma < 1) throw UsageError("grow_lower_bound_theta2: sigma must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("grow_lower_bound_theta2: requires p in (0, 1)");
  if (K <= sigma + 1) throw UsageError("grow_lower_bound_theta2: requires K > sigma + 1");
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double log_bound = 2.0 * (sigma + 1) * lp;
  for (int k = sigma + 1; k <= K; ++k) {
    const int trials = k * k;
    double lower_tail = 0.0;
    for (int i = 0; i < sigma; ++i) {
      const double log_choose = std::lgamma(trials + 1.0) - std::lgamma(i + 1.0) - std::lgamma(trials - i + 1.0);
      lower_tail += std::exp(log_choose + i * lp + (trials - i) * lq);
    }
    log_bound += 2.0 * std::log(-std::expm1(k * std::log(lower_tail)));
  }
  return std::exp(log_bound);
}

}  // namespace jigsaw::theory
