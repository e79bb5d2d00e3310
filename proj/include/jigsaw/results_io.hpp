#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "jigsaw/engine.hpp"
#include "jigsaw/montecarlo.hpp"

namespace jigsaw {

struct ResultRow {
  std::string topology;
  DynamicsParams params;
  McEstimate estimate;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "topology,sigma,tau,theta,rule,p,trials,successes,p_hat,ci_low,ci_high,tf_median,max_exams_per_vertex,seed";

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, std::span<const ResultRow> rows);
// Throws IoError when the file cannot be written.
void write_csv_file(const std::string& path, std::span<const ResultRow> rows);

nlohmann::json estimate_to_json(const McEstimate& e);
void write_json_file(const std::string& path, const nlohmann::json& j);

// Artifact version: release number plus git description at build time.
std::string version_string();

}  // namespace jigsaw
