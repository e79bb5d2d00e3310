// Command-line front end: experiments, theory constants and snapshots.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "jigsaw/config.hpp"
#include "jigsaw/engine.hpp"
#include "jigsaw/error.hpp"
#include "jigsaw/montecarlo.hpp"
#include "jigsaw/results_io.hpp"
#include "jigsaw/snapshot.hpp"
#include "jigsaw/theory.hpp"

using namespace jigsaw;
using nlohmann::json;

namespace {

// ============================================================================
// Shared experiment flags
// ============================================================================

struct Flags {
  std::string config;
  std::string topology, theta, rule, p_grid, grid_units, seed, out, summary, snapshot_dir;
  int sigma = 0, tau = 0;
  double p = 0, pc_lo = 0, pc_hi = 0, pc_tol = 0;
  unsigned pc_max_doublings = 0, parallelism = 0;
  std::size_t trials = 0, snapshot_every = 0;
  std::uint32_t box = 0;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* app) {
    opts["config"] = app->add_option("--config", config, "JSON config file; flags override its keys");
    opts["topology"] = app->add_option("--topology", topology, "e.g. ring:n=1024, torus:n=400,d=2");
    opts["sigma"] = app->add_option("--sigma", sigma);
    opts["tau"] = app->add_option("--tau", tau);
    opts["theta"] = app->add_option("--theta", theta, "integer or inf");
    opts["rule"] = app->add_option("--rule", rule, "threshold or basic");
    opts["p"] = app->add_option("--p", p, "people-edge probability (or p log n with --grid-units lambda)");
    opts["p_grid"] = app->add_option("--p-grid", p_grid, "a:b:step, inclusive");
    opts["grid_units"] = app->add_option("--grid-units", grid_units, "p or lambda");
    opts["pc_lo"] = app->add_option("--pc-lo", pc_lo);
    opts["pc_hi"] = app->add_option("--pc-hi", pc_hi);
    opts["pc_tol"] = app->add_option("--pc-tol", pc_tol);
    opts["pc_max_doublings"] = app->add_option("--pc-max-doublings", pc_max_doublings);
    opts["trials"] = app->add_option("--trials", trials);
    opts["seed"] = app->add_option("--seed", seed, "decimal or 0x-prefixed hex");
    opts["parallelism"] = app->add_option("--parallelism", parallelism, "worker threads (default JIGSAW_THREADS or 1)");
    opts["out"] = app->add_option("--out", out, "CSV output path (default stdout)");
    opts["summary"] = app->add_option("--summary", summary, "JSON summary path");
    opts["snapshot_every"] = app->add_option("--snapshot-every", snapshot_every, "write a PPM every k steps");
    opts["snapshot_dir"] = app->add_option("--snapshot-dir", snapshot_dir);
    opts["box"] = app->add_option("--box", box, "box side for grow");
  }

  bool has(const char* name) const { return opts.at(name)->count() > 0; }

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    bool parallelism_set = false;
    if (has("config")) {
      std::ifstream in(config);
      if (!in) throw IoError("cannot open config file '" + config + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw UsageError("config file '" + config + "': " + e.what());
      }
      c = config_from_json(j);
      parallelism_set = j.contains("parallelism");
    }
    if (!parallelism_set) c.parallelism = default_parallelism();
    if (has("topology")) c.topology = topology;
    if (has("sigma")) c.sigma = sigma;
    if (has("tau")) c.tau = tau;
    if (has("theta")) c.theta = parse_theta(theta);
    if (has("rule")) c.rule = parse_rule(rule);
    if (has("p")) c.p = p;
    if (has("p_grid")) c.p_grid = p_grid;
    if (has("grid_units")) c.grid_units = parse_grid_units(grid_units);
    if (has("pc_lo")) c.pc_lo = pc_lo;
    if (has("pc_hi")) c.pc_hi = pc_hi;
    if (has("pc_tol")) c.pc_tol = pc_tol;
    if (has("pc_max_doublings")) c.pc_max_doublings = pc_max_doublings;
    if (has("trials")) c.trials = trials;
    if (has("seed")) c.seed = parse_seed(seed);
    if (has("parallelism")) c.parallelism = parallelism;
    if (has("out")) c.out = out;
    if (has("summary")) c.summary = summary;
    if (has("snapshot_every")) c.snapshot_every = snapshot_every;
    if (has("snapshot_dir")) c.snapshot_dir = snapshot_dir;
    if (has("box")) c.box = box;
    if (c.parallelism == 0) throw UsageError("parallelism must be >= 1");
    c.params();  // validates
    return c;
  }

  static std::uint64_t parse_seed(const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
      throw UsageError("bad seed '" + s + "'");
    }
    if (used != s.size() || s.front() == '-') throw UsageError("bad seed '" + s + "'");
    return v;
  }
};

double to_probability(const ExperimentConfig& c, const Topology& t, double value) {
  const double p = c.grid_units == GridUnits::Lambda ? value / t.log_scale() : value;
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("probability outside [0, 1]: " + format_double(p));
  return p;
}

std::vector<double> resolve_grid(const ExperimentConfig& c, const Topology& t) {
  if (!c.p_grid) throw UsageError("this command needs --p-grid");
  auto grid = expand_grid(*c.p_grid);
  for (double& v : grid) v = to_probability(c, t, v);
  return grid;
}

void emit_csv(const ExperimentConfig& c, const std::vector<ResultRow>& rows) {
  if (c.out) {
    write_csv_file(*c.out, rows);
  } else {
    write_csv(std::cout, rows);
  }
}

json summary_base(const ExperimentConfig& c, const char* command, double seconds) {
  return {{"command", command},
          {"version", version_string()},
          {"config", config_to_json(c)},
          {"wall_clock_seconds", seconds}};
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

ResultRow make_row(const ExperimentConfig& c, const Topology& t, const McEstimate& e) {
  return {t.spec_string(), c.params(), e, c.seed};
}

// ============================================================================
// Experiment commands
// ============================================================================

void write_snapshots(const ExperimentConfig& c, const Topology& t, double p, std::size_t every) {
  if (!t.is_torus_2d()) throw UsageError("snapshots need a 2D torus topology");
  std::filesystem::create_directories(c.snapshot_dir);
  const auto sampler = EdgeSampler::lazy(derive_seed(c.seed, 0), p);
  RunOptions opts;
  opts.on_step = [&](std::size_t step, const Partition& P) {
    if (step % every != 0) return;
    char name[64];
    std::snprintf(name, sizeof name, "step_%05zu.ppm", step);
    write_ppm_file((std::filesystem::path(c.snapshot_dir) / name).string(), render_snapshot(dump_partition(P, step), t));
  };
  run(t, c.params(), sampler, opts);
}

int cmd_run(const Flags& f) {
  const auto t0 = Clock::now();
  const auto c = f.resolve();
  if (!c.p) throw UsageError("run needs --p (use sweep for --p-grid)");
  const auto t = Topology::parse(c.topology);
  McConfig mc;
  mc.topology = t;
  mc.params = c.params();
  mc.p = to_probability(c, t, *c.p);
  mc.trials = c.trials;
  mc.master_seed = c.seed;
  mc.parallelism = c.parallelism;
  mc.record_exams = true;
  const auto e = estimate_solve(mc);
  emit_csv(c, {make_row(c, t, e)});
  if (c.snapshot_every > 0) write_snapshots(c, t, mc.p, c.snapshot_every);
  if (c.summary) {
    auto j = summary_base(c, "run", since(t0));
    j["estimates"] = json::array({estimate_to_json(e)});
    write_json_file(*c.summary, j);
  }
  return 0;
}

int cmd_sweep(const Flags& f) {
  const auto t0 = Clock::now();
  const auto c = f.resolve();
  const auto t = Topology::parse(c.topology);
  const auto grid = resolve_grid(c, t);
  const auto sw = coupled_sweep(t, c.params(), grid, c.trials, c.seed, c.parallelism);
  std::vector<ResultRow> rows;
  for (const auto& e : sw.estimates) rows.push_back(make_row(c, t, e));
  emit_csv(c, rows);
  if (c.summary) {
    auto j = summary_base(c, "sweep", since(t0));
    j["estimates"] = json::array();
    for (const auto& e : sw.estimates) j["estimates"].push_back(estimate_to_json(e));
    write_json_file(*c.summary, j);
  }
  return 0;
}

int cmd_pc(const Flags& f) {
  const auto t0 = Clock::now();
  const auto c = f.resolve();
  const auto t = Topology::parse(c.topology);
  PcSearchOptions o;
  o.tol = c.grid_units == GridUnits::Lambda ? c.pc_tol / t.log_scale() : c.pc_tol;
  o.p_lo = to_probability(c, t, c.pc_lo);
  o.p_hi = to_probability(c, t, c.pc_hi);
  o.trials_per_level = c.trials;
  o.master_seed = c.seed;
  o.parallelism = c.parallelism;
  o.max_doublings = c.pc_max_doublings;
  const auto est = estimate_pc(t, c.params(), o);

  std::vector<ResultRow> rows;
  for (const auto& ev : est.evaluations) {
    McEstimate e;
    e.p = ev.p;
    e.trials = ev.trials;
    e.successes = ev.successes;
    e.p_hat = static_cast<double>(ev.successes) / static_cast<double>(ev.trials);
    e.ci_low = ev.ci_low;
    e.ci_high = ev.ci_high;
    e.tf_median = std::nan("");
    rows.push_back(make_row(c, t, e));
  }
  if (c.out) write_csv_file(*c.out, rows);
  const json result = {{"topology", t.spec_string()},
                       {"p_lo", est.p_lo},
                       {"p_hi", est.p_hi},
                       {"p_c_hat", est.p_c_hat},
                       {"lambda_c_hat", est.p_c_hat * t.log_scale()},
                       {"trials_per_level", est.trials_per_level},
                       {"converged", est.converged},
                       {"evaluations", est.evaluations.size()}};
  std::cout << result.dump() << '\n';
  if (c.summary) {
    auto j = summary_base(c, "pc", since(t0));
    j["pc"] = result;
    write_json_file(*c.summary, j);
  }
  if (!est.converged) {
    std::cerr << "pc: bracket could not be narrowed to the tolerance within the trial budget\n";
    return 2;
  }
  return 0;
}

int cmd_grow(const Flags& f) {
  const auto t0 = Clock::now();
  const auto c = f.resolve();
  if (!c.p) throw UsageError("grow needs --p");
  const double p = *c.p;
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("grow: p outside [0, 1]");
  const auto prm = c.params();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < c.trials; ++i) hits += local_grow(prm, p, derive_seed(c.seed, i), c.box, true).reached;
  const auto w = wilson_interval(hits, c.trials);
  json result = {{"box", c.box},
                 {"p", p},
                 {"trials", c.trials},
                 {"reached", hits},
                 {"p_hat", static_cast<double>(hits) / static_cast<double>(c.trials)},
                 {"ci_low", w.low},
                 {"ci_high", w.high}};
  if (prm.theta == 2 && prm.tau == 1 && p > 0.0 && p < 1.0) {
    result["lower_bound"] = theory::grow_lower_bound_theta2(prm.sigma, p, std::max<int>(c.box, prm.sigma + 2));
  }
  std::cout << result.dump() << '\n';
  if (c.summary) {
    auto j = summary_base(c, "grow", since(t0));
    j["grow"] = result;
    write_json_file(*c.summary, j);
  }
  return 0;
}

int cmd_render(const Flags& f) {
  const auto c = f.resolve();
  if (!c.p) throw UsageError("render needs --p");
  const auto t = Topology::parse(c.topology);
  write_snapshots(c, t, to_probability(c, t, *c.p), std::max<std::size_t>(c.snapshot_every, 1));
  return 0;
}

// ============================================================================
// Theory constants
// ============================================================================

struct TheoryFlags {
  std::string name;
  int sigma = 1, k = 6, ell = 4;
  double p_site = 0.6795, c = 1.5116, lam = 0.0388, r = 0.5, x = 1.0, p = 0.05;
  int K = 1000;
  std::string phi_mode = "mc";
  std::size_t phi_trials = 100000;
  std::string seed = "0";
  double abs_tol = 1e-10, rel_tol = 1e-10;
};

int cmd_theory(const TheoryFlags& f) {
  theory::QuadratureSpec q;
  q.abs_tol = f.abs_tol;
  q.rel_tol = f.rel_tol;
  json out = {{"name", f.name}};
  auto phi_spec = [&] {
    theory::PhiSpec s;
    s.k = f.k;
    s.ell = f.ell;
    if (f.phi_mode == "exact") {
      s.mode = theory::PhiMode::Exact;
    } else if (f.phi_mode == "mc") {
      s.mode = theory::PhiMode::MonteCarlo;
    } else {
      throw UsageError("--phi-mode must be exact or mc");
    }
    s.trials = f.phi_trials;
    s.seed = Flags::parse_seed(f.seed);
    return s;
  };
  if (f.name == "lambda") {
    const auto r = theory::lambda_sigma(f.sigma, q);
    out.update({{"sigma", f.sigma}, {"value", r.value}, {"error_estimate", r.error_estimate},
                {"method", "adaptive Simpson, log-substitution near 0"}});
  } else if (f.name == "nu") {
    const double v = theory::nu_sigma(f.sigma);
    const auto r = theory::nu_sigma_quadrature(f.sigma, q);
    out.update({{"sigma", f.sigma}, {"value", v}, {"error_estimate", std::abs(v - r.value) + r.error_estimate},
                {"method", "closed form (Lanczos gamma, Euler-Maclaurin zeta); error vs quadrature"},
                {"quadrature_value", r.value}});
  } else if (f.name == "g") {
    out.update({{"sigma", f.sigma}, {"x", f.x}, {"value", theory::g_sigma(f.sigma, f.x)},
                {"error_estimate", 0.0}, {"method", "series / log1p tail"}});
  } else if (f.name == "lb2d") {
    const auto m = theory::lb2d_infimum(f.c, f.lam);
    out.update({{"c", f.c}, {"lam", f.lam}, {"value", m.value}, {"argmin", m.argmin}, {"error_estimate", 1e-12},
                {"method", "golden section on [1,2] plus endpoints"}});
  } else if (f.name == "phi") {
    const theory::Phi phi(phi_spec());
    out.update({{"k", f.k}, {"ell", f.ell}, {"r", f.r}, {"value", phi(f.r)}, {"error_estimate", nullptr},
                {"method", f.phi_mode == "exact" ? "exact enumeration" : "random site orderings"}});
    if (phi.spec().mode == theory::PhiMode::MonteCarlo) {
      const double v = phi(f.r);
      out["error_estimate"] = std::sqrt(v * (1 - v) / static_cast<double>(f.phi_trials));
    } else {
      out["error_estimate"] = 0.0;
    }
  } else if (f.name == "ub2d") {
    const theory::Phi phi(phi_spec());
    const auto r = theory::ub2d_bound(phi, f.p_site, q);
    out.update({{"k", f.k}, {"ell", f.ell}, {"p_site", f.p_site}, {"value", r.value},
                {"error_estimate", r.error_estimate},
                {"method", std::string("adaptive Simpson; phi ") + (f.phi_mode == "exact" ? "exact" : "sampled")}});
  } else if (f.name == "grow") {
    out.update({{"sigma", f.sigma}, {"p", f.p}, {"K", f.K},
                {"value", theory::grow_lower_bound_theta2(f.sigma, f.p, f.K)}, {"error_estimate", 0.0},
                {"method", "truncated product, exact binomial tails"}});
  } else {
    throw UsageError("unknown constant '" + f.name + "'");
  }
  std::cout << out.dump() << '\n';
  return 0;
}

// ============================================================================
// Self test
// ============================================================================

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    failures += ok ? 0 : 1;
  };
  {
    const auto g = PuzzleGraph::from_topology(Topology::ring(3));
    const std::vector<std::pair<Vertex, Vertex>> pairs{{0, 1}, {0, 2}, {1, 2}};
    int solved = 0;
    for (int mask = 0; mask < 8; ++mask) {
      std::vector<std::pair<Vertex, Vertex>> e;
      for (int i = 0; i < 3; ++i) {
        if (mask >> i & 1) e.push_back(pairs[i]);
      }
      solved += run(g, DynamicsParams::adjacent_edge(), EdgeSampler::explicit_edges(e)).solved;
    }
    report("ring of three solves exactly when the people graph is connected", solved == 4);
  }
  report("lambda_1 = pi^2/6", std::abs(theory::lambda_sigma(1).value - M_PI * M_PI / 6) < 1e-6);
  report("nu_1 = 3.216", std::abs(theory::nu_sigma(1) - 3.216) < 1e-3);
  {
    const auto t = Topology::ring(200);
    const auto s = EdgeSampler::lazy(1, 0.05);
    const auto a = run(t, DynamicsParams::adjacent_edge(), s);
    const auto b = run_slowed(t, DynamicsParams::adjacent_edge(), s, SlowPolicy::OneEdge, 2);
    report("slowed-down run reaches the same partition", a.final.labels() == b.final.labels());
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jigsaw percolation simulator and constant calculator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  Flags run_f, sweep_f, pc_f, grow_f, render_f;
  auto* run_cmd = app.add_subcommand("run", "estimate P(Solve) at one p");
  run_f.attach(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "coupled sweep over a p grid");
  sweep_f.attach(sweep_cmd);
  auto* pc_cmd = app.add_subcommand("pc", "bisection search for P(Solve) = 1/2");
  pc_f.attach(pc_cmd);
  auto* grow_cmd = app.add_subcommand("grow", "local growth from one corner of a box");
  grow_f.attach(grow_cmd);
  auto* render_cmd = app.add_subcommand("render", "write PPM snapshots of one run on a 2D torus");
  render_f.attach(render_cmd);

  TheoryFlags tf;
  auto* theory_cmd = app.add_subcommand("theory", "print a constant as JSON");
  theory_cmd->add_option("--const", tf.name, "lambda, nu, g, lb2d, phi, ub2d or grow")->required();
  theory_cmd->add_option("--sigma", tf.sigma);
  theory_cmd->add_option("--k", tf.k);
  theory_cmd->add_option("--ell", tf.ell);
  theory_cmd->add_option("--p-site", tf.p_site);
  theory_cmd->add_option("--c", tf.c);
  theory_cmd->add_option("--lam", tf.lam);
  theory_cmd->add_option("--r", tf.r);
  theory_cmd->add_option("--x", tf.x);
  theory_cmd->add_option("--p", tf.p);
  theory_cmd->add_option("--K", tf.K);
  theory_cmd->add_option("--phi-mode", tf.phi_mode, "exact or mc");
  theory_cmd->add_option("--phi-trials", tf.phi_trials);
  theory_cmd->add_option("--seed", tf.seed);
  theory_cmd->add_option("--abs-tol", tf.abs_tol);
  theory_cmd->add_option("--rel-tol", tf.rel_tol);

  auto* selftest_cmd = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_f);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_f);
    if (pc_cmd->parsed()) return cmd_pc(pc_f);
    if (grow_cmd->parsed()) return cmd_grow(grow_f);
    if (render_cmd->parsed()) return cmd_render(render_f);
    if (theory_cmd->parsed()) return cmd_theory(tf);
    if (selftest_cmd->parsed()) return cmd_selftest();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (best estimate " << e.best_estimate() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
