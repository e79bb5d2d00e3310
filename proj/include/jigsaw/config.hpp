#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jigsaw/engine.hpp"

namespace jigsaw {

enum class GridUnits { P, Lambda };  // Lambda: grid values are p * log n

struct ExperimentConfig {
  std::string topology = "ring:n=1024";
  int sigma = 1;
  int tau = 1;
  int theta = kInfiniteTheta;
  MergeRule rule = MergeRule::Threshold;

  std::optional<double> p;
  std::optional<std::string> p_grid;  // "a:b:step", inclusive
  GridUnits grid_units = GridUnits::P;

  double pc_lo = 0.0;
  double pc_hi = 1.0;
  double pc_tol = 0.01;
  unsigned pc_max_doublings = 6;

  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned parallelism = 1;

  std::optional<std::string> out;      // CSV path
  std::optional<std::string> summary;  // JSON path

  std::size_t snapshot_every = 0;  // 0 disables snapshots
  std::string snapshot_dir = "snapshots";
  std::uint32_t box = 256;         // grow box side

  DynamicsParams params() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// Unknown keys and ill-typed values throw UsageError.
ExperimentConfig config_from_json(const nlohmann::json& j);
// Only keys with values are written, so config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// Expands "a:b:step" into a, a + step, ... up to b (inclusive within 1e-9 * step).
std::vector<double> expand_grid(const std::string& spec);

std::string grid_units_to_string(GridUnits u);
GridUnits parse_grid_units(const std::string& text);

// Parallelism default: JIGSAW_THREADS if set and positive, else 1.
unsigned default_parallelism();

}  // namespace jigsaw
