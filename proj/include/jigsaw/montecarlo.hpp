#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "jigsaw/engine.hpp"
#include "jigsaw/topology.hpp"

namespace jigsaw {

struct McConfig {
  Topology topology = Topology::ring(3);
  DynamicsParams params;
  double p = 0.0;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  unsigned parallelism = 1;
  bool record_exams = false;
};

// Outcome of trial i, which always uses people-graph seed derive_seed(master_seed, i).
struct TrialOutcome {
  bool solved = false;
  std::size_t t_final = 0;
  std::uint32_t max_exams_per_vertex = 0;
  std::size_t decided_pairs = 0;
};

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

// Wilson score interval; always satisfies 0 <= low <= successes/trials <= high <= 1.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

struct McEstimate {
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double tf_mean = 0.0;
  double tf_median = 0.0;
  std::uint32_t max_exams_per_vertex = 0;  // max over trials; 0 unless exams were recorded
  double mean_decided_pairs = 0.0;
};

// Runs trials [first, first + count) of cfg on a prebuilt graph. Results are
// indexed by trial and do not depend on cfg.parallelism.
std::vector<TrialOutcome> run_trials(const std::shared_ptr<const PuzzleGraph>& graph, const McConfig& cfg,
                                     std::size_t first, std::size_t count);
McEstimate summarize(double p, std::span<const TrialOutcome> outcomes);

McEstimate estimate_solve(const McConfig& cfg);

// ----------------------------------------------------------------------------
// Critical probability
// ----------------------------------------------------------------------------

struct PcSearchOptions {
  double tol = 0.01;
  std::size_t trials_per_level = 400;
  std::uint64_t master_seed = 0;
  unsigned parallelism = 1;
  double p_lo = 0.0;
  double p_hi = 1.0;
  unsigned max_doublings = 6;  // trial budget per level: trials_per_level * 2^max_doublings
};

struct PcEvaluation {
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

struct PcEstimate {
  double p_lo = 0.0;
  double p_hi = 1.0;
  double p_c_hat = 0.5;
  std::size_t trials_per_level = 0;
  // False when a midpoint stayed statistically indistinguishable from 1/2
  // after the full trial budget; the bracket is then the residual one.
  bool converged = false;
  std::vector<PcEvaluation> evaluations;
};

// Stochastic bisection for P(Solve) = 1/2. The bracket moves only when the
// Wilson interval at the midpoint excludes 1/2; otherwise trials double up to
// the budget. Throws BracketError if [p_lo, p_hi] does not straddle 1/2.
PcEstimate estimate_pc(const Topology& topology, const DynamicsParams& params, const PcSearchOptions& opts);

// ----------------------------------------------------------------------------
// Coupled sweep
// ----------------------------------------------------------------------------

struct SweepResult {
  std::vector<double> grid;
  std::vector<McEstimate> estimates;         // one per grid point
  std::vector<std::vector<char>> indicators; // [trial][grid point] solve indicator
};

// Trial i uses the same people-graph seed at every p, so its solve indicator
// is nondecreasing along the grid. Throws UsageError unless the grid is
// strictly increasing.
SweepResult coupled_sweep(const Topology& topology, const DynamicsParams& params, std::span<const double> p_grid,
                          std::size_t trials, std::uint64_t master_seed, unsigned parallelism = 1);

// ----------------------------------------------------------------------------
// Final time
// ----------------------------------------------------------------------------

struct TfStatistics {
  std::size_t trials = 0;
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0, mean = 0;
  // log T_f / log n over trials with T_f >= 1.
  std::size_t positive_trials = 0;
  double median_log_ratio = std::numeric_limits<double>::quiet_NaN();
  double lambda = 0.0;          // p * log n
  double lambda_sigma = 0.0;
  double expected_ratio = std::numeric_limits<double>::quiet_NaN();  // lambda_sigma / lambda when lambda > lambda_sigma
  bool near_expected = false;   // |median_log_ratio - expected_ratio| <= band
};

// Quantiles of T_f from the synchronous dynamics. `band` is the tolerance of
// the near_expected flag.
TfStatistics tf_statistics(const McConfig& cfg, double band = 0.25);

// Quantile by linear interpolation between order statistics (q in [0,1]).
double quantile(std::vector<double> values, double q);

}  // namespace jigsaw
