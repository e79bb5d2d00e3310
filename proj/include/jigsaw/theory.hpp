#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jigsaw/quadrature.hpp"

namespace jigsaw::theory {

// -log P(Poisson(x) >= sigma), for x > 0.
double g_sigma(int sigma, double x);

QuadratureResult lambda_sigma(int sigma, const QuadratureSpec& quad = {});

double nu_sigma(int sigma);
QuadratureResult nu_sigma_quadrature(int sigma, const QuadratureSpec& quad = {});

// inf over alpha in [1, 2] of -alpha c log(1 - e^{-lam alpha c}) - alpha c log 4.65.
double lb2d_objective(double c, double lam, double alpha);
MinimumResult lb2d_infimum(double c, double lam);

// ----------------------------------------------------------------------------
// Crossing probability of the triangle Q_k
// ----------------------------------------------------------------------------

enum class PhiMode { Exact, MonteCarlo };

struct PhiSpec {
  int k = 1;
  int ell = 0;
  PhiMode mode = PhiMode::Exact;
  std::size_t trials = 100000;  // MonteCarlo only
  std::uint64_t seed = 0;       // MonteCarlo only
  unsigned parallelism = 1;
};

inline constexpr int kPhiExactMaxK = 6;

// phi(r) = sum_j w_j r^j (1 - r)^{M - j} with M = |Q_k| - 1 sites besides the
// origin. Exact mode: w_j counts good configurations with j open sites.
// MonteCarlo mode: w_j = C(M, j) times the estimated probability that j
// uniformly chosen open sites are good, from random site orderings, so the
// estimate is a smooth nondecreasing function of r.
class Phi {
 public:
  explicit Phi(const PhiSpec& spec);

  double operator()(double r) const;

  const PhiSpec& spec() const { return spec_; }
  int site_count() const { return M_ + 1; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  PhiSpec spec_;
  int M_ = 0;
  std::vector<double> weights_;
};

// 1/2 * int_0^{r_max} -log phi(1 - e^{-(k+ell) r}) dr, r_max = -log(1 - p_site)/(k+ell).
QuadratureResult ub2d_bound(const Phi& phi, double p_site, const QuadratureSpec& quad = {});

// p^{2(sigma+1)} prod_{k=sigma+1}^{K} (1 - P(Bin(k^2, p) < sigma)^k)^2.
double grow_lower_bound_theta2(int sigma, double p, int K);

}  // namespace jigsaw::theory
