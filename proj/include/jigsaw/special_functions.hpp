#pragma once

namespace jigsaw::theory {

// Gamma function for real x, not a non-positive integer (Lanczos, g = 7).
double gamma_fn(double x);

// Riemann zeta for real s > 1 (Euler-Maclaurin summation).
double zeta(double s);

// log(n!) for n >= 0.
double log_factorial(int n);

}  // namespace jigsaw::theory
