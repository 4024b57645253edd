#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rovella/core/errors.hpp"
#include "rovella/core/params.hpp"

namespace rovella {

inline constexpr int kConfigVersion = 1;

/// One experiment run as described by a JSON configuration file.
struct ExperimentConfig {
  int version = kConfigVersion;
  std::string kind;
  ParamValues params{};
  std::string map;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: ROVELLA_THREADS or 1
  std::string output_dir = "out";
  nlohmann::json settings = nlohmann::json::object();  // fully resolved
};

inline const std::set<std::string>& experiment_kinds() {
  static const std::set<std::string> k{"simulate", "ulam", "corr", "conv", "loglaw", "dims", "norms", "conditions", "report"};
  return k;
}

/// Default settings per kind. Every accepted settings key appears here;
/// a null default accepts a number or null.
inline nlohmann::json kind_defaults(const std::string& kind) {
  using nlohmann::json;
  if (kind == "simulate")
    return {{"n", 100000},          {"burn_in", 1000},       {"x0", nullptr},          {"y0", nullptr},
            {"write_orbit", true},  {"log_integral_lengths", json::array()},        {"uniform_bins", 4096},
            {"tail_orbits", 0},     {"tail_length", 10000},  {"tail_delta", 0.005},    {"tail_eps", 0.1},
            {"tail_c", nullptr}};
  if (kind == "ulam")
    return {{"bins", 4096}, {"samples_per_bin", 64}, {"tol", 1e-12}, {"max_iter", 100000}};
  if (kind == "corr" || kind == "conv")
    return {{"ensemble", 100000}, {"chains", 64}, {"burn_in", 10000}, {"stride", 16}, {"max_lag", 30},
            {"blocks", 100},      {"f", "x"},     {"g", "x"}};
  if (kind == "loglaw")
    return {{"targets", 20},   {"starts", 21},     {"k_min", 4},      {"k_max", 12},     {"cap", 100000000},
            {"flow", true},    {"flow_k_max", 10}, {"flow_cap", 1e8}, {"t_glob", 1.0},   {"cloud", 2000000},
            {"chains", 64},    {"burn_in", 10000}, {"stride", 16},    {"min_count", 50}};
  if (kind == "dims")
    return {{"targets", 20}, {"k_min", 4},       {"k_max", 12}, {"cloud", 2000000},
            {"chains", 64},  {"burn_in", 10000}, {"stride", 16}, {"min_count", 50}};
  if (kind == "norms")
    return {{"mode", "observable"}, {"observable", "G"}, {"grid", 512}, {"alpha", 0.5}, {"p", 2.0}, {"r", 0.5},
            {"growth_n", 0},        {"growth_grid", 128}, {"functions", 200}};
  if (kind == "conditions") return {{"depth", 60}};
  if (kind == "report") return {{"input_dir", "."}, {"strict", false}};
  throw ValidationError("unknown experiment kind '" + kind + "'");
}

inline std::string default_map(const std::string& kind) {
  if (kind == "corr" || kind == "conv" || kind == "loglaw" || kind == "dims") return "rovella_F";
  if (kind == "norms") return "rovella_F";
  if (kind == "report") return "none";
  return "rovella_T";
}

inline const std::set<std::string>& allowed_maps(const std::string& kind) {
  static const std::set<std::string> sim{"rovella_T", "rovella_F", "doubling"};
  static const std::set<std::string> ulam{"rovella_T", "doubling", "identity"};
  static const std::set<std::string> two{"rovella_F", "rovella_T"};
  static const std::set<std::string> base{"rovella_T"};
  static const std::set<std::string> skew{"rovella_F"};
  static const std::set<std::string> none{"none"};
  if (kind == "simulate" || kind == "corr" || kind == "conv") return sim;
  if (kind == "ulam") return ulam;
  if (kind == "loglaw" || kind == "dims") return two;
  if (kind == "conditions") return base;
  if (kind == "norms") return skew;
  return none;
}

namespace detail {

inline bool is_count(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

inline bool same_json_type(const nlohmann::json& def, const nlohmann::json& v) {
  if (def.is_null()) return v.is_null() || v.is_number();
  if (def.is_number()) return v.is_number();
  if (def.is_array()) return v.is_array();
  return def.type() == v.type();
}

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

inline double number_at(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ValidationError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

/// Keys that hold sizes or counts: they must be positive.
inline const std::set<std::string>& positive_keys() {
  static const std::set<std::string> k{"n",        "bins",    "samples_per_bin", "max_iter", "ensemble",  "chains",
                                       "stride",   "blocks",  "targets",         "starts",   "cap",       "flow_cap",
                                       "cloud",    "grid",    "growth_grid",     "functions", "depth",    "tail_length",
                                       "uniform_bins", "min_count", "tol",       "t_glob",   "tail_delta", "tail_eps"};
  return k;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  detail::reject_unknown(j, {"version", "kind", "params", "map", "seed", "threads", "output_dir", "settings"}, "config");
  ExperimentConfig c;
  if (!j.contains("version") || !j["version"].is_number_integer()) throw ValidationError("config.version is required (integer)");
  c.version = j["version"].get<int>();
  if (c.version != kConfigVersion) throw ValidationError("unsupported config version " + std::to_string(c.version));
  if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError("config.kind is required (string)");
  c.kind = j["kind"].get<std::string>();
  if (!experiment_kinds().count(c.kind)) throw ValidationError("unknown experiment kind '" + c.kind + "'");

  if (j.contains("params")) {
    const auto& p = j["params"];
    detail::reject_unknown(p, {"lambda1", "lambda2", "lambda3", "rho", "c0", "c1"}, "params");
    auto get = [&](const char* k, double& dst) {
      if (p.contains(k)) dst = detail::number_at(p, k, "params");
    };
    get("lambda1", c.params.eigen.lambda1);
    get("lambda2", c.params.eigen.lambda2);
    get("lambda3", c.params.eigen.lambda3);
    get("rho", c.params.rho);
    get("c0", c.params.c0);
    get("c1", c.params.c1);
  }
  validate_params(c.params);

  c.map = default_map(c.kind);
  if (j.contains("map")) {
    if (!j["map"].is_string()) throw ValidationError("config.map must be a string");
    c.map = j["map"].get<std::string>();
  }
  if (!allowed_maps(c.kind).count(c.map)) throw ValidationError("map '" + c.map + "' not supported by kind '" + c.kind + "'");

  if (j.contains("seed")) {
    if (!detail::is_count(j["seed"])) throw ValidationError("config.seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    if (!detail::is_count(j["threads"])) throw ValidationError("config.threads must be a non-negative integer");
    c.threads = j["threads"].get<unsigned>();
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ValidationError("config.output_dir must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }

  c.settings = kind_defaults(c.kind);
  if (j.contains("settings")) {
    const auto& s = j["settings"];
    if (!s.is_object()) throw ValidationError("config.settings must be a JSON object");
    for (auto it = s.begin(); it != s.end(); ++it) {
      if (!c.settings.contains(it.key())) throw ValidationError("unknown key '" + it.key() + "' in settings of kind '" + c.kind + "'");
      if (!detail::same_json_type(c.settings[it.key()], it.value()))
        throw ValidationError("settings." + it.key() + " has the wrong type");
      c.settings[it.key()] = it.value();
    }
  }
  for (auto it = c.settings.begin(); it != c.settings.end(); ++it) {
    if (detail::positive_keys().count(it.key()) && it.value().is_number() && !(it.value().get<double>() > 0.0))
      throw ValidationError("settings." + it.key() + " must be positive");
  }
  return c;
}

inline nlohmann::json serialize_config(const ExperimentConfig& c) {
  const auto& e = c.params.eigen;
  return {{"version", c.version},
          {"kind", c.kind},
          {"params", {{"lambda1", e.lambda1}, {"lambda2", e.lambda2}, {"lambda3", e.lambda3}, {"rho", c.params.rho}, {"c0", c.params.c0}, {"c1", c.params.c1}}},
          {"map", c.map},
          {"seed", c.seed},
          {"threads", c.threads},
          {"output_dir", c.output_dir},
          {"settings", c.settings}};
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace rovella
