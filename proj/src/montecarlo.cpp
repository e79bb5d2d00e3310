#include "jigsaw/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "jigsaw/error.hpp"
#include "jigsaw/theory.hpp"

namespace jigsaw {

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw UsageError("wilson_interval: zero trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  WilsonInterval w{std::clamp(center - half, 0.0, 1.0), std::clamp(center + half, 0.0, 1.0)};
  w.low = std::min(w.low, phat);
  w.high = std::max(w.high, phat);
  return w;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<TrialOutcome> run_trials(const std::shared_ptr<const PuzzleGraph>& graph, const McConfig& cfg,
                                     std::size_t first, std::size_t count) {
  cfg.params.validate();
  std::vector<TrialOutcome> out(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.parallelism, static_cast<unsigned>(count)));
  RunOptions opts;
  opts.record_exams = cfg.record_exams;

  auto work = [&](unsigned w) {
    Engine engine(graph);
    for (std::size_t i = w; i < count; i += workers) {
      const auto sampler = EdgeSampler::lazy(derive_seed(cfg.master_seed, first + i), cfg.p);
      const auto sum = engine.simulate(cfg.params, sampler, opts);
      out[i] = {sum.solved, sum.t_final, sum.exams.max_first_exams_per_vertex, sum.exams.decided_pairs};
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

McEstimate summarize(double p, std::span<const TrialOutcome> outcomes) {
  if (outcomes.empty()) throw UsageError("summarize: no trials");
  McEstimate e;
  e.p = p;
  e.trials = outcomes.size();
  std::vector<double> tf;
  tf.reserve(outcomes.size());
  double decided = 0.0;
  for (const auto& o : outcomes) {
    e.successes += o.solved ? 1 : 0;
    tf.push_back(static_cast<double>(o.t_final));
    e.max_exams_per_vertex = std::max(e.max_exams_per_vertex, o.max_exams_per_vertex);
    decided += static_cast<double>(o.decided_pairs);
  }
  e.p_hat = static_cast<double>(e.successes) / static_cast<double>(e.trials);
  const auto w = wilson_interval(e.successes, e.trials);
  e.ci_low = w.low;
  e.ci_high = w.high;
  double sum = 0.0;
  for (double v : tf) sum += v;
  e.tf_mean = sum / static_cast<double>(tf.size());
  e.tf_median = quantile(std::move(tf), 0.5);
  e.mean_decided_pairs = decided / static_cast<double>(e.trials);
  return e;
}

McEstimate estimate_solve(const McConfig& cfg) {
  if (cfg.trials == 0) throw UsageError("estimate_solve: trials must be >= 1");
  const auto graph = std::make_shared<const PuzzleGraph>(PuzzleGraph::from_topology(cfg.topology));
  const auto outcomes = run_trials(graph, cfg, 0, cfg.trials);
  return summarize(cfg.p, outcomes);
}

// ----------------------------------------------------------------------------

PcEstimate estimate_pc(const Topology& topology, const DynamicsParams& params, const PcSearchOptions& opts) {
  if (!(opts.tol > 0.0)) throw UsageError("estimate_pc: tol must be > 0");
  if (opts.trials_per_level == 0) throw UsageError("estimate_pc: trials_per_level must be >= 1");
  if (!(0.0 <= opts.p_lo && opts.p_lo < opts.p_hi && opts.p_hi <= 1.0)) {
    throw UsageError("estimate_pc: need 0 <= p_lo < p_hi <= 1");
  }
  const auto graph = std::make_shared<const PuzzleGraph>(PuzzleGraph::from_topology(topology));
  McConfig cfg;
  cfg.topology = topology;
  cfg.params = params;
  cfg.master_seed = opts.master_seed;
  cfg.parallelism = opts.parallelism;

  PcEstimate est;
  est.trials_per_level = opts.trials_per_level;
  const std::size_t budget = opts.trials_per_level << opts.max_doublings;

  // Trials at a level extend the ones already run there, so doubling costs
  // only the new half. All levels share trial seeds (coupled in p).
  auto evaluate = [&](double p, std::size_t n, std::vector<TrialOutcome>& have) {
    cfg.p = p;
    if (have.size() < n) {
      auto more = run_trials(graph, cfg, have.size(), n - have.size());
      have.insert(have.end(), more.begin(), more.end());
    }
    const auto e = summarize(p, have);
    est.evaluations.push_back({p, e.trials, e.successes, e.ci_low, e.ci_high});
    return e;
  };

  std::vector<TrialOutcome> lo_trials;
  std::vector<TrialOutcome> hi_trials;
  const auto at_lo = evaluate(opts.p_lo, opts.trials_per_level, lo_trials);
  if (at_lo.ci_low > 0.5) {
    throw BracketError("estimate_pc: P(Solve) at p_lo = " + std::to_string(opts.p_lo) + " is already above 1/2");
  }
  const auto at_hi = evaluate(opts.p_hi, opts.trials_per_level, hi_trials);
  if (at_hi.ci_high < 0.5) {
    throw BracketError("estimate_pc: P(Solve) at p_hi = " + std::to_string(opts.p_hi) + " is still below 1/2");
  }

  double lo = opts.p_lo;
  double hi = opts.p_hi;
  bool exhausted = false;
  while (hi - lo >= opts.tol && !exhausted) {
    const double mid = 0.5 * (lo + hi);
    std::vector<TrialOutcome> trials;
    std::size_t n = opts.trials_per_level;
    while (true) {
      const auto e = evaluate(mid, n, trials);
      if (e.ci_high < 0.5) {
        lo = mid;
        break;
      }
      if (e.ci_low > 0.5) {
        hi = mid;
        break;
      }
      if (n * 2 > budget) {
        exhausted = true;
        break;
      }
      n *= 2;
    }
  }
  est.p_lo = lo;
  est.p_hi = hi;
  est.p_c_hat = 0.5 * (lo + hi);
  est.converged = !exhausted;
  return est;
}

// ----------------------------------------------------------------------------

SweepResult coupled_sweep(const Topology& topology, const DynamicsParams& params, std::span<const double> p_grid,
                          std::size_t trials, std::uint64_t master_seed, unsigned parallelism) {
  params.validate();
  if (p_grid.empty()) throw UsageError("coupled_sweep: empty grid");
  if (trials == 0) throw UsageError("coupled_sweep: trials must be >= 1");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) throw UsageError("coupled_sweep: p outside [0, 1]");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) throw UsageError("coupled_sweep: grid must be strictly increasing");
  }
  const auto graph = std::make_shared<const PuzzleGraph>(PuzzleGraph::from_topology(topology));
  SweepResult out;
  out.grid.assign(p_grid.begin(), p_grid.end());
  out.indicators.assign(trials, std::vector<char>(p_grid.size(), 0));
  McConfig cfg;
  cfg.topology = topology;
  cfg.params = params;
  cfg.master_seed = master_seed;
  cfg.parallelism = parallelism;
  for (std::size_t j = 0; j < p_grid.size(); ++j) {
    cfg.p = p_grid[j];
    const auto outcomes = run_trials(graph, cfg, 0, trials);
    for (std::size_t i = 0; i < trials; ++i) out.indicators[i][j] = outcomes[i].solved ? 1 : 0;
    out.estimates.push_back(summarize(cfg.p, outcomes));
  }
  return out;
}

// ----------------------------------------------------------------------------

TfStatistics tf_statistics(const McConfig& cfg, double band) {
  if (cfg.trials == 0) throw UsageError("tf_statistics: trials must be >= 1");
  const auto graph = std::make_shared<const PuzzleGraph>(PuzzleGraph::from_topology(cfg.topology));
  const auto outcomes = run_trials(graph, cfg, 0, cfg.trials);
  TfStatistics s;
  s.trials = outcomes.size();
  std::vector<double> tf;
  std::vector<double> ratio;
  const double log_n = cfg.topology.log_scale();
  double sum = 0.0;
  for (const auto& o : outcomes) {
    const auto t = static_cast<double>(o.t_final);
    tf.push_back(t);
    sum += t;
    if (o.t_final >= 1) ratio.push_back(std::log(t) / log_n);
  }
  s.min = quantile(tf, 0.0);
  s.q25 = quantile(tf, 0.25);
  s.median = quantile(tf, 0.5);
  s.q75 = quantile(tf, 0.75);
  s.max = quantile(tf, 1.0);
  s.mean = sum / static_cast<double>(tf.size());
  s.positive_trials = ratio.size();
  s.median_log_ratio = quantile(std::move(ratio), 0.5);
  s.lambda = cfg.p * log_n;
  s.lambda_sigma = theory::lambda_sigma(cfg.params.sigma).value;
  if (s.lambda > s.lambda_sigma) {
    s.expected_ratio = s.lambda_sigma / s.lambda;
    s.near_expected = std::abs(s.median_log_ratio - s.expected_ratio) <= band;
  }
  return s;
}

}  // namespace jigsaw
