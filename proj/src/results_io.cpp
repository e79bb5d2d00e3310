#include "jigsaw/results_io.hpp"

#include <charconv>
#include <fstream>

#include "jigsaw/error.hpp"

#ifndef JIGSAW_VERSION
#define JIGSAW_VERSION "0.1.0"
#endif

namespace jigsaw {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& e = r.estimate;
    out << csv_field(r.topology) << ',' << r.params.sigma << ',' << r.params.tau << ','
        << theta_to_string(r.params.theta) << ',' << rule_to_string(r.params.rule) << ',' << format_double(e.p)
        << ',' << e.trials << ',' << e.successes << ',' << format_double(e.p_hat) << ','
        << format_double(e.ci_low) << ',' << format_double(e.ci_high) << ',' << format_double(e.tf_median) << ','
        << e.max_exams_per_vertex << ',' << r.seed << '\n';
  }
}

void write_csv_file(const std::string& path, std::span<const ResultRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out, rows);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json estimate_to_json(const McEstimate& e) {
  return {{"p", e.p},
          {"trials", e.trials},
          {"successes", e.successes},
          {"p_hat", e.p_hat},
          {"ci_low", e.ci_low},
          {"ci_high", e.ci_high},
          {"tf_mean", e.tf_mean},
          {"tf_median", e.tf_median},
          {"max_exams_per_vertex", e.max_exams_per_vertex},
          {"mean_decided_pairs", e.mean_decided_pairs}};
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string version_string() { return JIGSAW_VERSION; }

}  // namespace jigsaw
