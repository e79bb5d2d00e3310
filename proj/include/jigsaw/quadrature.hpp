#pragma once

#include <cstddef>
#include <functional>

namespace jigsaw::theory {

enum class EndpointMode {
  None,            // plain adaptive Simpson on [a, b]
  LogSingularLeft  // substitute x = a + (b - a) e^s, s in [s_min, 0]
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double tail_cutoff = 1e-12;  // semi-infinite tails end where the integrand drops below this
  EndpointMode endpoint = EndpointMode::LogSingularLeft;
  double s_min = -40.0;
  int max_depth = 50;
  std::size_t max_evaluations = 5'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

// Adaptive Simpson on [a, b]. Throws ConvergenceError (carrying the best
// estimate) when the depth or evaluation budget runs out before tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec);

// Integral over [a, inf) of a positive decreasing integrand. The upper limit
// is pushed out by doubling until f falls below spec.tail_cutoff.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a, const QuadratureSpec& spec);

struct MinimumResult {
  double argmin = 0.0;
  double value = 0.0;
};

// Golden-section search on [a, b], then compared against both endpoints.
MinimumResult golden_section_minimize(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace jigsaw::theory
