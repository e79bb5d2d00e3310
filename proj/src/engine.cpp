#include "jigsaw/engine.hpp"

#include <algorithm>
#include <optional>

#include "jigsaw/error.hpp"

namespace jigsaw {

// ============================================================================
// Parameters
// ============================================================================

DynamicsParams DynamicsParams::make(int sigma, int tau, int theta, MergeRule rule) {
  DynamicsParams p{sigma, tau, theta, rule};
  p.validate();
  return p;
}

void DynamicsParams::validate() const {
  if (sigma < 1) throw UsageError("sigma must be >= 1");
  if (tau < 1) throw UsageError("tau must be >= 1");
  if (theta < 1) throw UsageError("theta must be >= 1 or inf");
  if (theta_finite() && theta < tau) throw UsageError("theta must be >= tau");
}

std::string theta_to_string(int theta) { return theta == kInfiniteTheta ? "inf" : std::to_string(theta); }

int parse_theta(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfiniteTheta;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw UsageError("theta must be an integer or 'inf', got '" + text + "'");
  }
  if (used != text.size()) throw UsageError("theta must be an integer or 'inf', got '" + text + "'");
  return value;
}

std::string rule_to_string(MergeRule rule) { return rule == MergeRule::Basic ? "basic" : "threshold"; }

MergeRule parse_rule(const std::string& text) {
  if (text == "threshold") return MergeRule::Threshold;
  if (text == "basic") return MergeRule::Basic;
  throw UsageError("rule must be 'threshold' or 'basic', got '" + text + "'");
}

// ============================================================================
// Internals
// ============================================================================

namespace {

constexpr std::uint32_t kNil = 0xffffffffu;

// People-graph access on local vertex ids, with optional examination ledger.
struct PeopleOracle {
  const PuzzleGraph* graph = nullptr;
  const EdgeSampler* sampler = nullptr;
  ExamLedger* ledger = nullptr;
  std::uint64_t queries = 0;
  bool identity = false;

  bool operator()(Vertex a, Vertex b) {
    ++queries;
    if (identity && ledger == nullptr) return sampler->status(a, b);
    const Vertex ga = graph->global_id(a);
    const Vertex gb = graph->global_id(b);
    const bool st = sampler->status(ga, gb);
    if (ledger != nullptr) ledger->record(ga, gb, st);
    return st;
  }
};

// A puzzle edge crossing from cluster `lo` to cluster `hi` (lo < hi as roots).
struct Crossing {
  std::uint64_t key;  // (lo << 32) | hi
  Vertex a;           // endpoint in lo
  Vertex b;           // endpoint in hi
};

// Merge test between two clusters given the puzzle edges that cross between them.
class PairEvaluator {
 public:
  PairEvaluator(const PuzzleGraph& g, Partition& part, const DynamicsParams& params, PeopleOracle& people)
      : g_(g), part_(part), params_(params), people_(people) {}

  void resize(std::size_t n) {
    stamp_.assign(n, 0);
    cursor_.assign(n, kNil);
  }

  bool operator()(Vertex lo, Vertex hi, std::span<const Crossing> edges) {
    for (const auto& c : edges) {
      if (people_(c.a, c.b)) return true;  // double connection
    }
    if (params_.rule == MergeRule::Basic) return any_people_edge(lo, hi);

    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    side_a_.clear();
    side_b_.clear();
    for (const auto& c : edges) {
      if (stamp_[c.a] != epoch_) {
        stamp_[c.a] = epoch_;
        side_a_.push_back(c.a);
      }
      if (stamp_[c.b] != epoch_) {
        stamp_[c.b] = epoch_;
        side_b_.push_back(c.b);
      }
    }
    for (Vertex v : side_a_) {
      if (vertex_fires(v, hi)) return true;
    }
    for (Vertex v : side_b_) {
      if (vertex_fires(v, lo)) return true;
    }
    return false;
  }

 private:
  // Puzzle-count rule, then people+puzzle rule, for v counted into `target`.
  bool vertex_fires(Vertex v, Vertex target) {
    int in_target = 0;
    for (Vertex w : g_.neighbors(v)) {
      if (part_.find(w) == target) ++in_target;
    }
    if (params_.theta_finite() && in_target >= params_.theta) return true;
    if (in_target < params_.tau) return false;
    // v is an endpoint of a crossing edge, so a singleton target was already
    // queried by the double-connection test.
    if (part_.cluster_size(target) == 1) return false;
    int found = 0;
    return scan_members(target, [&](Vertex x) { return people_(v, x) && ++found >= params_.sigma; });
  }

  bool any_people_edge(Vertex lo, Vertex hi) {
    Vertex small = lo;
    Vertex large = hi;
    if (part_.cluster_size(small) > part_.cluster_size(large)) std::swap(small, large);
    for (Vertex x = part_.first_member(small); x != Partition::kNone; x = part_.next_member(x)) {
      if (scan_members(large, [&](Vertex y) { return people_(x, y); })) return true;
    }
    return false;
  }

  // Visits the members of `target` cyclically from its cursor and stops at
  // the first member for which f returns true. The cursor then moves past that
  // member, so successive scans of a cluster start at different members and
  // the examinations they cause are spread over the whole cluster.
  template <class F>
  bool scan_members(Vertex target, F&& f) {
    const Vertex head = part_.first_member(target);
    const Vertex start = cursor_[target] == kNil ? head : cursor_[target];
    Vertex x = start;
    do {
      Vertex next = part_.next_member(x);
      if (next == Partition::kNone) next = head;
      if (f(x)) {
        cursor_[target] = next;
        return true;
      }
      x = next;
    } while (x != start);
    return false;
  }

  const PuzzleGraph& g_;
  Partition& part_;
  const DynamicsParams& params_;
  PeopleOracle& people_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> side_a_;
  std::vector<Vertex> side_b_;
  std::vector<Vertex> cursor_;  // per cluster root: member where the next scan starts
};

std::shared_ptr<const PuzzleGraph> borrow(const PuzzleGraph& g) {
  return std::shared_ptr<const PuzzleGraph>(&g, [](const PuzzleGraph*) {});
}

}  // namespace

// ============================================================================
// Engine state
// ============================================================================

struct Engine::State {
  std::shared_ptr<const PuzzleGraph> graph;
  Partition part;

  // Outgoing half-edge list per cluster root (CSR positions, singly linked).
  std::vector<std::uint32_t> he_source;
  std::vector<std::uint32_t> he_next;
  std::vector<std::uint32_t> list_head;
  std::vector<std::uint32_t> list_tail;

  std::vector<std::uint32_t> dirty_stamp;
  std::uint32_t stamp = 0;
  std::vector<Vertex> dirty;

  std::vector<Crossing> crossings;
  std::vector<std::pair<Vertex, Vertex>> edges;  // cluster-graph edges found this step
  std::size_t last_merged = 0;                   // edges actually merged along this step

  DynamicsParams params;
  PeopleOracle people;
  std::optional<ExamLedger> own_ledger;
  std::optional<PairEvaluator> evaluator;

  explicit State(std::shared_ptr<const PuzzleGraph> g) : graph(std::move(g)) {
    const auto& gr = *graph;
    he_source.resize(gr.half_edge_count());
    for (Vertex v = 0; v < gr.size(); ++v) {
      for (auto h = gr.edge_begin(v); h < gr.edge_end(v); ++h) he_source[h] = v;
    }
  }

  void append_half_edge(Vertex root, std::uint32_t h) {
    he_next[h] = kNil;
    if (list_head[root] == kNil) {
      list_head[root] = h;
    } else {
      he_next[list_tail[root]] = h;
    }
    list_tail[root] = h;
  }

  void concat_lists(Vertex winner, Vertex loser) {
    if (list_head[loser] == kNil) return;
    if (list_head[winner] == kNil) {
      list_head[winner] = list_head[loser];
    } else {
      he_next[list_tail[winner]] = list_head[loser];
    }
    list_tail[winner] = list_tail[loser];
    list_head[loser] = list_tail[loser] = kNil;
  }

  void reset(const Partition* initial, const DynamicsParams& p, const EdgeSampler& sampler, ExamLedger* ledger) {
    p.validate();
    const auto& g = *graph;
    const std::size_t n = g.size();
    params = p;
    people = PeopleOracle{&g, &sampler, ledger, 0, g.is_identity()};
    if (initial != nullptr) {
      if (initial->vertex_count() != n) throw UsageError("initial partition has the wrong vertex count");
      part = *initial;
    } else {
      part = Partition(n);
    }
    he_next.resize(g.half_edge_count());
    list_head.assign(n, kNil);
    list_tail.assign(n, kNil);
    if (initial == nullptr) {
      for (Vertex v = 0; v < n; ++v) {
        const auto b = g.edge_begin(v);
        const auto e = g.edge_end(v);
        if (b == e) continue;
        for (auto h = b; h + 1 < e; ++h) he_next[h] = h + 1;
        he_next[e - 1] = kNil;
        list_head[v] = b;
        list_tail[v] = e - 1;
      }
    } else {
      for (Vertex v = 0; v < n; ++v) {
        const Vertex r = part.find(v);
        for (auto h = g.edge_begin(v); h < g.edge_end(v); ++h) append_half_edge(r, h);
      }
    }
    dirty_stamp.assign(n, 0);
    stamp = 0;
    dirty = part.roots();
    evaluator.emplace(g, part, params, people);
    evaluator->resize(n);
  }

  // Walks the boundary list of each dirty cluster, dropping half-edges that
  // became internal, and evaluates every adjacent cluster pair once. All puzzle
  // edges between d and another cluster lie on d's list, so pairs can be
  // grouped per dirty cluster. Fills `edges` with the cluster-graph edges.
  void find_cluster_edges() {
    ++stamp;
    for (Vertex r : dirty) dirty_stamp[r] = stamp;
    edges.clear();
    const auto& g = *graph;
    for (Vertex d : dirty) {
      crossings.clear();
      std::uint32_t prev = kNil;
      std::uint32_t h = list_head[d];
      while (h != kNil) {
        const std::uint32_t nxt = he_next[h];
        const Vertex other = part.find(g.target(h));
        if (other == d) {
          if (prev == kNil) {
            list_head[d] = nxt;
          } else {
            he_next[prev] = nxt;
          }
          if (list_tail[d] == h) list_tail[d] = prev;
        } else {
          if (dirty_stamp[other] != stamp || d < other) {
            const Vertex u = he_source[h];
            const Vertex w = g.target(h);
            if (d < other) {
              crossings.push_back({(std::uint64_t{d} << 32) | other, u, w});
            } else {
              crossings.push_back({(std::uint64_t{other} << 32) | d, w, u});
            }
          }
          prev = h;
        }
        h = nxt;
      }
      if (crossings.size() > 1) {
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& x, const Crossing& y) { return x.key < y.key; });
      }
      for (std::size_t i = 0; i < crossings.size();) {
        std::size_t j = i + 1;
        while (j < crossings.size() && crossings[j].key == crossings[i].key) ++j;
        const auto lo = static_cast<Vertex>(crossings[i].key >> 32);
        const auto hi = static_cast<Vertex>(crossings[i].key & 0xffffffffu);
        if ((*evaluator)(lo, hi, std::span<const Crossing>(crossings.data() + i, j - i))) {
          edges.emplace_back(lo, hi);
        }
        i = j;
      }
    }
  }

  void merge(std::span<const std::pair<Vertex, Vertex>> chosen) {
    last_merged = chosen.size();
    for (auto [a, b] : chosen) {
      const Vertex ra = part.find(a);
      const Vertex rb = part.find(b);
      if (ra == rb) continue;
      const Vertex winner = part.unite(ra, rb);
      concat_lists(winner, winner == ra ? rb : ra);
    }
    ++stamp;
    dirty.clear();
    for (auto [a, b] : chosen) {
      const Vertex r = part.find(a);
      if (dirty_stamp[r] != stamp) {
        dirty_stamp[r] = stamp;
        dirty.push_back(r);
      }
      (void)b;
    }
  }

  bool synchronous_step() {
    find_cluster_edges();
    if (edges.empty()) return false;
    merge(edges);
    return true;
  }

  bool slowed_step(SlowPolicy policy, SplitMix64& rng) {
    dirty = part.roots();
    find_cluster_edges();
    if (edges.empty()) return false;
    std::vector<std::pair<Vertex, Vertex>> chosen;
    if (policy == SlowPolicy::OneEdge) {
      chosen.push_back(edges[rng.below(edges.size())]);
    } else {
      for (const auto& e : edges) {
        if (rng.next() & 1u) chosen.push_back(e);
      }
      if (chosen.empty()) chosen.push_back(edges[rng.below(edges.size())]);
    }
    merge(chosen);
    return true;
  }

  void fill_exam_stats(ExamStats& out, const ExamLedger* ledger) const {
    out.queries = people.queries;
    if (ledger != nullptr) {
      out.recorded = true;
      out.decided_pairs = ledger->decided_pairs();
      out.max_first_exams_per_vertex = ledger->max_exams_per_vertex();
    }
  }
};

// ============================================================================
// Engine
// ============================================================================

Engine::Engine(std::shared_ptr<const PuzzleGraph> graph) {
  if (!graph) throw UsageError("Engine: null puzzle graph");
  state_ = std::make_unique<State>(std::move(graph));
}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

const PuzzleGraph& Engine::graph() const noexcept { return *state_->graph; }
const Partition& Engine::partition() const noexcept { return state_->part; }
Partition Engine::take_partition() { return std::move(state_->part); }

namespace {

template <class StepFn>
RunSummary drive(Engine::State& s, const RunOptions& opts, ExamLedger* ledger, StepFn&& step_once) {
  RunSummary out;
  if (opts.on_step) opts.on_step(0, s.part);
  std::size_t t = 0;
  while (step_once()) {
    ++t;
    out.merge_trace.push_back(s.last_merged);
    out.max_size_trace.push_back(s.part.max_cluster_size());
    if (opts.on_step) opts.on_step(t, s.part);
  }
  out.t_final = t;
  out.cluster_count = s.part.cluster_count();
  out.max_cluster_size = s.part.max_cluster_size();
  out.solved = out.cluster_count <= 1;
  s.fill_exam_stats(out.exams, ledger);
  return out;
}

}  // namespace

RunSummary Engine::simulate(const DynamicsParams& params, const EdgeSampler& sampler, const RunOptions& opts) {
  auto& s = *state_;
  ExamLedger* ledger = nullptr;
  if (opts.record_exams) ledger = &s.own_ledger.emplace(s.graph->global_size());
  s.reset(nullptr, params, sampler, ledger);
  return drive(s, opts, ledger, [&] { return s.synchronous_step(); });
}

RunSummary Engine::simulate_from(const Partition& initial, const DynamicsParams& params, const EdgeSampler& sampler,
                                 const RunOptions& opts) {
  auto& s = *state_;
  ExamLedger* ledger = nullptr;
  if (opts.record_exams) ledger = &s.own_ledger.emplace(s.graph->global_size());
  s.reset(&initial, params, sampler, ledger);
  return drive(s, opts, ledger, [&] { return s.synchronous_step(); });
}

RunSummary Engine::simulate_slowed(const DynamicsParams& params, const EdgeSampler& sampler, SlowPolicy policy,
                                   std::uint64_t policy_seed, const RunOptions& opts) {
  auto& s = *state_;
  ExamLedger* ledger = nullptr;
  if (opts.record_exams) ledger = &s.own_ledger.emplace(s.graph->global_size());
  s.reset(nullptr, params, sampler, ledger);
  SplitMix64 rng(policy_seed);
  return drive(s, opts, ledger, [&] { return s.slowed_step(policy, rng); });
}

// ============================================================================
// Free functions
// ============================================================================

namespace {

RunResult to_result(Engine& e, RunSummary&& sum) {
  RunResult r;
  r.final = e.take_partition();
  r.t_final = sum.t_final;
  r.solved = sum.solved;
  r.merge_trace = std::move(sum.merge_trace);
  r.max_size_trace = std::move(sum.max_size_trace);
  r.exams = sum.exams;
  return r;
}

}  // namespace

bool cluster_edge_exists(const PuzzleGraph& g, const Partition& state, const DynamicsParams& params,
                         const EdgeSampler& sampler, ExamLedger* ledger, Vertex wi, Vertex wj) {
  params.validate();
  if (state.vertex_count() != g.size()) throw UsageError("cluster_edge_exists: partition size mismatch");
  if (wi >= g.size() || wj >= g.size()) throw UsageError("cluster_edge_exists: vertex out of range");
  Partition part = state;
  Vertex ri = part.find(wi);
  Vertex rj = part.find(wj);
  if (ri == rj) throw UsageError("cluster_edge_exists: both vertices lie in the same cluster");
  if (ri > rj) std::swap(ri, rj);
  std::vector<Crossing> edges;
  const std::uint64_t key = (std::uint64_t{ri} << 32) | rj;
  for (Vertex u = part.first_member(ri); u != Partition::kNone; u = part.next_member(u)) {
    for (Vertex w : g.neighbors(u)) {
      if (part.find(w) == rj) edges.push_back({key, u, w});
    }
  }
  if (edges.empty()) return false;  // no puzzle edge between them; every rule needs one
  PeopleOracle people{&g, &sampler, ledger, 0, g.is_identity()};
  PairEvaluator eval(g, part, params, people);
  eval.resize(g.size());
  return eval(ri, rj, edges);
}

std::pair<Partition, bool> step(const PuzzleGraph& g, const Partition& state, const DynamicsParams& params,
                                const EdgeSampler& sampler, ExamLedger* ledger) {
  Engine::State s(borrow(g));
  s.reset(&state, params, sampler, ledger);
  const bool merged = s.synchronous_step();
  return {std::move(s.part), merged};
}

RunResult run(const PuzzleGraph& g, const DynamicsParams& params, const EdgeSampler& sampler,
              const RunOptions& opts) {
  Engine e(borrow(g));
  auto sum = e.simulate(params, sampler, opts);
  return to_result(e, std::move(sum));
}

RunResult run(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
              const RunOptions& opts) {
  const auto g = PuzzleGraph::from_topology(t);
  return run(g, params, sampler, opts);
}

RunResult run_from(const PuzzleGraph& g, const Partition& initial, const DynamicsParams& params,
                   const EdgeSampler& sampler, const RunOptions& opts) {
  Engine e(borrow(g));
  auto sum = e.simulate_from(initial, params, sampler, opts);
  return to_result(e, std::move(sum));
}

RunResult run_slowed(const PuzzleGraph& g, const DynamicsParams& params, const EdgeSampler& sampler,
                     SlowPolicy policy, std::uint64_t policy_seed, const RunOptions& opts) {
  Engine e(borrow(g));
  auto sum = e.simulate_slowed(params, sampler, policy, policy_seed, opts);
  return to_result(e, std::move(sum));
}

RunResult run_slowed(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
                     SlowPolicy policy, std::uint64_t policy_seed, const RunOptions& opts) {
  const auto g = PuzzleGraph::from_topology(t);
  return run_slowed(g, params, sampler, policy, policy_seed, opts);
}

}  // namespace jigsaw
