#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rovella/core/errors.hpp"
#include "rovella/experiment/io.hpp"

namespace rovella {

/// Report input directory lacks the files it needs. missing() lists them.
class MissingInputError : public ValidationError {
 public:
  MissingInputError(const std::string& what, std::vector<std::string> missing)
      : ValidationError(what), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::string> missing_;
};

struct CriterionRule {
  int id;
  std::string title;
  std::vector<std::string> required;  // check names that must all be present and true
  std::string prefix;                 // optional: checks starting with this also count
  std::size_t prefix_min = 0;         // distinct prefixed checks needed
  std::string produced_by;            // run that produces the checks
};

inline const std::vector<CriterionRule>& criterion_rules() {
  static const std::vector<CriterionRule> rules{
      {1, "norm inequalities", {"norm_inequalities"}, "", 0, "norms (mode inequalities)"},
      {2, "mollifier bounds", {"mollifier"}, "", 0, "norms (mode mollifier)"},
      {3, "fiber-map square variation", {"var_square_stable", "var_square_bound"}, "", 0, "norms (observable G)"},
      {4,
       "Ulam oracle",
       {"ulam_doubling_uniform_n2", "ulam_doubling_uniform_n16", "ulam_doubling_uniform_n256", "ulam_rovella_residual_n4096"},
       "ulam_rows_stochastic_",
       0,
       "ulam (doubling n=2,16,256; rovella_T n=4096)"},
      {5, "doubling correlation oracle", {"corr_doubling_oracle"}, "", 0, "corr (doubling, f=g=x, ensemble 1e6)"},
      {6, "exponential decay of correlations", {}, "corr_decay_", 3, "corr (rovella_F, three observable pairs)"},
      {7, "logarithm law, map", {"loglaw_map"}, "", 0, "loglaw"},
      {8, "flow reduction", {"loglaw_flow"}, "", 0, "loglaw (flow true)"},
      {9, "integrability of -log|x|", {"log_integral_stable", "log_integral_uniform"}, "", 0, "simulate (log_integral_lengths)"},
      {10, "tail decay", {"tail_decay"}, "", 0, "simulate (tail_orbits)"},
      {11, "determinism across worker counts", {"determinism"}, "", 0, "any run repeated with different threads"},
  };
  return rules;
}

namespace detail {

inline std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs whose configs differ only in threads/output_dir form a group; every
/// group with at least two thread counts must have byte-identical CSV files.
/// Returns nullopt when no such group exists.
inline std::optional<bool> determinism_check(const std::vector<std::filesystem::path>& run_dirs, nlohmann::json& detail_out) {
  std::map<std::string, std::vector<std::pair<unsigned, std::filesystem::path>>> groups;
  for (const auto& d : run_dirs) {
    if (!std::filesystem::exists(d / "config.json")) continue;
    auto c = read_json(d / "config.json");
    const unsigned threads = c.value("threads", 0u);
    c.erase("threads");
    c.erase("output_dir");
    groups[c.dump()].push_back({threads, d});
  }
  std::optional<bool> result;
  for (auto& [key, members] : groups) {
    std::set<unsigned> counts;
    for (auto& m : members) counts.insert(m.first);
    if (members.size() < 2 || counts.size() < 2) continue;
    bool same = true;
    const auto& ref = members.front().second;
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(ref))
      if (e.path().extension() == ".csv") names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    for (std::size_t k = 1; k < members.size(); ++k) {
      std::vector<std::string> other;
      for (const auto& e : std::filesystem::directory_iterator(members[k].second))
        if (e.path().extension() == ".csv") other.push_back(e.path().filename().string());
      std::sort(other.begin(), other.end());
      if (other != names) same = false;
      for (const auto& n : names)
        if (same && file_bytes(ref / n) != file_bytes(members[k].second / n)) same = false;
    }
    nlohmann::json g = {{"runs", nlohmann::json::array()}, {"identical", same}};
    for (auto& m : members) g["runs"].push_back(m.second.string());
    detail_out.push_back(g);
    result = result.value_or(true) && same;
  }
  return result;
}

}  // namespace detail

/// Collates every summary.json below dir into one report with a status per
/// acceptance criterion: "pass", "fail", or "not-run" when the inputs for
/// it are absent. Throws MissingInputError when no run is found.
inline nlohmann::json build_report(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw MissingInputError("report: not a directory: " + dir.string(), {dir.string()});
  std::vector<std::filesystem::path> run_dirs;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() == "summary.json") run_dirs.push_back(e.path().parent_path());
  std::sort(run_dirs.begin(), run_dirs.end());
  if (run_dirs.empty()) {
    std::vector<std::string> missing;
    for (const auto& r : criterion_rules())
      missing.push_back("<run>/summary.json and <run>/config.json from " + r.produced_by + " (criterion " + std::to_string(r.id) + ")");
    throw MissingInputError("report: no experiment outputs found in " + dir.string(), missing);
  }

  nlohmann::json report = {{"runs", nlohmann::json::array()}};
  std::map<std::string, std::vector<bool>> checks;
  for (const auto& d : run_dirs) {
    const auto s = read_json(d / "summary.json");
    nlohmann::json run = {{"dir", std::filesystem::relative(d, dir).generic_string()},
                          {"kind", s.value("kind", "")},
                          {"map", s.value("map", "")},
                          {"fits", s.value("fits", nlohmann::json::object())},
                          {"checks", s.value("checks", nlohmann::json::object())}};
    if (s.contains("conditions")) run["conditions"] = s["conditions"];
    report["runs"].push_back(run);
    for (auto it = run["checks"].begin(); it != run["checks"].end(); ++it) checks[it.key()].push_back(it.value().get<bool>());
  }
  nlohmann::json det = nlohmann::json::array();
  if (auto d = detail::determinism_check(run_dirs, det)) checks["determinism"].push_back(*d);
  report["determinism_groups"] = det;

  nlohmann::json crit = nlohmann::json::object();
  for (const auto& r : criterion_rules()) {
    bool any_false = false, all_present = true;
    for (const auto& name : r.required) {
      auto it = checks.find(name);
      if (it == checks.end()) {
        all_present = false;
        continue;
      }
      for (bool b : it->second) any_false |= !b;
    }
    std::size_t prefixed = 0;
    if (!r.prefix.empty()) {
      for (const auto& [name, vals] : checks) {
        if (name.rfind(r.prefix, 0) != 0) continue;
        ++prefixed;
        for (bool b : vals) any_false |= !b;
      }
      if (prefixed < r.prefix_min) all_present = false;
    }
    const std::string status = any_false ? "fail" : (all_present ? "pass" : "not-run");
    crit[std::to_string(r.id)] = {{"title", r.title}, {"status", status}};
  }
  report["criteria"] = crit;
  return report;
}

inline bool report_has_failure(const nlohmann::json& report) {
  for (auto it = report["criteria"].begin(); it != report["criteria"].end(); ++it)
    if (it.value()["status"] == "fail") return true;
  return false;
}

}  // namespace rovella
