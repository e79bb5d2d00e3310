#include "jigsaw/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "jigsaw/error.hpp"

namespace jigsaw::theory {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2j} / (2j)! for j = 1..8.
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0};

}  // namespace

double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  double a = kLanczos[0];
  const double t = z + kLanczosG + 0.5;
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double zeta(double s) {
  if (!(s > 1.0)) throw DomainError("zeta: requires s > 1");
  constexpr int kN = 10;
  double sum = 0.0;
  for (int k = 1; k < kN; ++k) sum += std::pow(static_cast<double>(k), -s);
  const double n = kN;
  const double n_s = std::pow(n, -s);
  sum += n_s * n / (s - 1.0) + 0.5 * n_s;
  // Correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}.
  double rising = s;
  double power = n_s / n;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    sum += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2.0 * static_cast<double>(j) + 1.0) * (s + 2.0 * static_cast<double>(j) + 2.0);
    power /= n * n;
  }
  return sum;
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  double acc = 0.0;
  for (int i = 2; i <= n; ++i) acc += std::log(static_cast<double>(i));
  return acc;
}

}  // namespace jigsaw::theory
