#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jigsaw/partition.hpp"
#include "jigsaw/puzzle_graph.hpp"
#include "jigsaw/randomness.hpp"
#include "jigsaw/topology.hpp"

namespace jigsaw {

// ============================================================================
// Parameters
// ============================================================================

enum class MergeRule {
  Threshold,  // (sigma, tau, theta) conditions: double connection, puzzle count, people+puzzle count
  Basic,      // any people edge plus any puzzle edge between the two clusters
};

inline constexpr int kInfiniteTheta = std::numeric_limits<int>::max();

struct DynamicsParams {
  int sigma = 1;
  int tau = 1;
  int theta = kInfiniteTheta;
  MergeRule rule = MergeRule::Threshold;

  // Validating constructor: sigma, tau >= 1 and theta >= tau unless infinite.
  static DynamicsParams make(int sigma, int tau, int theta, MergeRule rule = MergeRule::Threshold);
  // sigma = tau = 1, theta = inf.
  static DynamicsParams adjacent_edge() { return make(1, 1, kInfiniteTheta); }
  static DynamicsParams basic() { return make(1, 1, kInfiniteTheta, MergeRule::Basic); }

  bool theta_finite() const noexcept { return theta != kInfiniteTheta; }
  void validate() const;

  bool operator==(const DynamicsParams&) const = default;
};

std::string theta_to_string(int theta);
int parse_theta(const std::string& text);
std::string rule_to_string(MergeRule rule);
MergeRule parse_rule(const std::string& text);

// ============================================================================
// Results
// ============================================================================

struct ExamStats {
  std::uint64_t queries = 0;  // people-edge lookups including repeats
  bool recorded = false;      // whether a ledger was kept
  std::size_t decided_pairs = 0;
  std::uint32_t max_first_exams_per_vertex = 0;
};

// Everything about a run except the final partition.
struct RunSummary {
  std::size_t t_final = 0;  // first t with P^{t+1} = P^t
  bool solved = false;      // final partition has a single cluster
  std::size_t cluster_count = 0;
  std::size_t max_cluster_size = 0;
  std::vector<std::size_t> merge_trace;     // per step: number of cluster-graph edges merged
  std::vector<std::size_t> max_size_trace;  // per step: largest cluster after the step
  ExamStats exams;
};

struct RunResult {
  Partition final;
  std::size_t t_final = 0;
  bool solved = false;
  std::vector<std::size_t> merge_trace;
  std::vector<std::size_t> max_size_trace;
  ExamStats exams;
};

// Called with (t, P^t) for t = 0 and after every merging step.
using StepHook = std::function<void(std::size_t, const Partition&)>;

struct RunOptions {
  bool record_exams = false;
  StepHook on_step;
};

enum class SlowPolicy {
  OneEdge,       // merge the endpoints of one uniformly chosen cluster-graph edge
  RandomSubset,  // keep each cluster-graph edge with probability 1/2 (at least one)
};

// ============================================================================
// Engine
// ============================================================================

// Reusable simulator bound to one puzzle graph. Buffers persist between runs,
// so a single Engine per worker thread serves a whole batch of trials.
//
// Only clusters that changed in the previous step are re-examined: a pair of
// clusters that were both left untouched already failed every merge test on
// the same sets. Each cluster keeps its list of outgoing puzzle half-edges;
// internal half-edges are dropped lazily the next time the list is walked.
class Engine {
 public:
  explicit Engine(std::shared_ptr<const PuzzleGraph> graph);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  const PuzzleGraph& graph() const noexcept;

  // Synchronous dynamics from `initial` (all singletons when omitted) to the fixed point.
  RunSummary simulate(const DynamicsParams& params, const EdgeSampler& sampler, const RunOptions& opts = {});
  RunSummary simulate_from(const Partition& initial, const DynamicsParams& params, const EdgeSampler& sampler,
                           const RunOptions& opts = {});
  // Slowed-down dynamics: each step merges along a nonempty subset of the cluster graph.
  RunSummary simulate_slowed(const DynamicsParams& params, const EdgeSampler& sampler, SlowPolicy policy,
                             std::uint64_t policy_seed, const RunOptions& opts = {});

  // Partition left by the last simulate* call.
  const Partition& partition() const noexcept;
  Partition take_partition();

  struct State;  // defined in engine.cpp

 private:
  std::unique_ptr<State> state_;
};

// ============================================================================
// Operations
// ============================================================================

// Whether clusters wi and wj (any member of each) are joined in the cluster
// graph of `state`. Only vertices on cluster-crossing puzzle edges are inspected.
bool cluster_edge_exists(const PuzzleGraph& g, const Partition& state, const DynamicsParams& params,
                         const EdgeSampler& sampler, ExamLedger* ledger, Vertex wi, Vertex wj);

// One synchronous step. Returns the new partition and whether anything merged.
std::pair<Partition, bool> step(const PuzzleGraph& g, const Partition& state, const DynamicsParams& params,
                                const EdgeSampler& sampler, ExamLedger* ledger = nullptr);

RunResult run(const PuzzleGraph& g, const DynamicsParams& params, const EdgeSampler& sampler,
              const RunOptions& opts = {});
RunResult run(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
              const RunOptions& opts = {});
RunResult run_from(const PuzzleGraph& g, const Partition& initial, const DynamicsParams& params,
                   const EdgeSampler& sampler, const RunOptions& opts = {});
RunResult run_slowed(const PuzzleGraph& g, const DynamicsParams& params, const EdgeSampler& sampler,
                     SlowPolicy policy, std::uint64_t policy_seed, const RunOptions& opts = {});
RunResult run_slowed(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
                     SlowPolicy policy, std::uint64_t policy_seed, const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

// Runs the dynamics on the puzzle and people graphs induced by A.
bool is_internally_solved(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
                          std::span<const Vertex> A);

// Every vertex outside A has at least sigma people neighbours in A.
bool is_unstoppable(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
                    std::span<const Vertex> A);

// No merge condition fires between any two clusters of P. Throws UsageError if
// a cluster is not puzzle-connected, unless require_connected is false
// (common refinements of inert partitions may have disconnected blocks).
bool is_inert(const PuzzleGraph& g, const DynamicsParams& params, const EdgeSampler& sampler,
              const Partition& P, bool require_connected = true);
bool is_inert(const Topology& t, const DynamicsParams& params, const EdgeSampler& sampler,
              const Partition& P, bool require_connected = true);

// ---------------------------------------------------------------------------
// Local growth from a single centre
// ---------------------------------------------------------------------------

struct GrowResult {
  bool reached = false;        // cluster touches {x = L-1} or {y = L-1}
  std::vector<Vertex> cluster; // cells as x + L*y, in order of addition
  std::size_t steps = 0;
};

// Growth on the box [0, L)^2 from (0,0), a finite stand-in for the quadrant.
// Each step adjoins every cell that is doubly connected to the cluster, has at
// least theta puzzle neighbours in it, or has at least tau puzzle and sigma
// people neighbours in it. With stop_at_boundary the process halts as soon as
// the far boundary is touched (the cluster is then partial).
GrowResult local_grow(const DynamicsParams& params, double p, std::uint64_t seed, std::uint32_t L,
                      bool stop_at_boundary = false);

// ---------------------------------------------------------------------------
// Square completion on the 2D torus
// ---------------------------------------------------------------------------

// Edge id of the puzzle edge from v in direction dir (0: +x, 1: +y) is 2v + dir.
// Starts from the puzzle edges whose endpoints are people-adjacent and keeps
// completing unit squares that contain two occupied edges sharing a corner.
std::vector<bool> square_completion_run(const Topology& torus, const EdgeSampler& sampler);
// Connected components of the occupied edge set (isolated vertices are singletons).
Partition square_completion_components(const Topology& torus, const std::vector<bool>& occupied);

}  // namespace jigsaw
