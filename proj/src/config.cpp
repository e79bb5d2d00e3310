#include "jigsaw/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "jigsaw/error.hpp"

namespace jigsaw {

namespace {

const std::set<std::string> kKeys = {
    "topology", "sigma",      "tau",    "theta",   "rule",           "p",
    "p_grid",   "grid_units", "pc_lo",  "pc_hi",   "pc_tol",         "pc_max_doublings",
    "trials",   "seed",       "parallelism", "out", "summary",       "snapshot_every",
    "snapshot_dir", "box"};

template <class T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("bad number '" + text + "'");
  }
  if (used != text.size()) throw UsageError("bad number '" + text + "'");
  return v;
}

}  // namespace

DynamicsParams ExperimentConfig::params() const { return DynamicsParams::make(sigma, tau, theta, rule); }

std::string grid_units_to_string(GridUnits u) { return u == GridUnits::P ? "p" : "lambda"; }

GridUnits parse_grid_units(const std::string& text) {
  if (text == "p") return GridUnits::P;
  if (text == "lambda") return GridUnits::Lambda;
  throw UsageError("grid units must be 'p' or 'lambda', got '" + text + "'");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw UsageError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("topology")) c.topology = get<std::string>(j, "topology");
  if (j.contains("sigma")) c.sigma = get<int>(j, "sigma");
  if (j.contains("tau")) c.tau = get<int>(j, "tau");
  if (j.contains("theta")) {
    const auto& t = j.at("theta");
    c.theta = t.is_string() ? parse_theta(t.get<std::string>()) : get<int>(j, "theta");
  }
  if (j.contains("rule")) c.rule = parse_rule(get<std::string>(j, "rule"));
  if (j.contains("p")) c.p = get<double>(j, "p");
  if (j.contains("p_grid")) c.p_grid = get<std::string>(j, "p_grid");
  if (j.contains("grid_units")) c.grid_units = parse_grid_units(get<std::string>(j, "grid_units"));
  if (j.contains("pc_lo")) c.pc_lo = get<double>(j, "pc_lo");
  if (j.contains("pc_hi")) c.pc_hi = get<double>(j, "pc_hi");
  if (j.contains("pc_tol")) c.pc_tol = get<double>(j, "pc_tol");
  if (j.contains("pc_max_doublings")) c.pc_max_doublings = get<unsigned>(j, "pc_max_doublings");
  if (j.contains("trials")) c.trials = get<std::size_t>(j, "trials");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("parallelism")) c.parallelism = get<unsigned>(j, "parallelism");
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  if (j.contains("summary")) c.summary = get<std::string>(j, "summary");
  if (j.contains("snapshot_every")) c.snapshot_every = get<std::size_t>(j, "snapshot_every");
  if (j.contains("snapshot_dir")) c.snapshot_dir = get<std::string>(j, "snapshot_dir");
  if (j.contains("box")) c.box = get<std::uint32_t>(j, "box");
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["topology"] = c.topology;
  j["sigma"] = c.sigma;
  j["tau"] = c.tau;
  if (c.theta == kInfiniteTheta) {
    j["theta"] = "inf";
  } else {
    j["theta"] = c.theta;
  }
  j["rule"] = rule_to_string(c.rule);
  if (c.p) j["p"] = *c.p;
  if (c.p_grid) j["p_grid"] = *c.p_grid;
  j["grid_units"] = grid_units_to_string(c.grid_units);
  j["pc_lo"] = c.pc_lo;
  j["pc_hi"] = c.pc_hi;
  j["pc_tol"] = c.pc_tol;
  j["pc_max_doublings"] = c.pc_max_doublings;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["parallelism"] = c.parallelism;
  if (c.out) j["out"] = *c.out;
  if (c.summary) j["summary"] = *c.summary;
  j["snapshot_every"] = c.snapshot_every;
  j["snapshot_dir"] = c.snapshot_dir;
  j["box"] = c.box;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

std::vector<double> expand_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos) {
    throw UsageError("grid must look like a:b:step, got '" + spec + "'");
  }
  const double a = parse_double(spec.substr(0, c1));
  const double b = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = parse_double(spec.substr(c2 + 1));
  if (!(step > 0.0) || !(b >= a)) throw UsageError("grid needs step > 0 and b >= a: '" + spec + "'");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 1'000'000) throw UsageError("grid too large: '" + spec + "'");
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(a + step * static_cast<double>(i));
  return out;
}

unsigned default_parallelism() {
  if (const char* env = std::getenv("JIGSAW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace jigsaw
