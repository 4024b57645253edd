#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rovella/rovella.hpp"

using namespace rovella;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("rovella_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig config_in(json j, const fs::path& out) {
  j["version"] = 1;
  j["output_dir"] = out.string();
  return parse_config(j);
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ROVELLA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, DefaultsAreFilledIn) {
  const auto c = parse_config(json{{"version", 1}, {"kind", "corr"}});
  EXPECT_EQ(c.map, "rovella_F");
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.settings["ensemble"].get<double>(), 100000);
  EXPECT_EQ(c.settings["burn_in"].get<double>(), 10000);
  EXPECT_EQ(c.settings["stride"].get<double>(), 16);
  EXPECT_EQ(c.settings["blocks"].get<double>(), 100);
  EXPECT_DOUBLE_EQ(c.params.rho, std::pow(2.0, 1.2));
}

TEST(Config, RoundTripIsIdempotent) {
  const json j = {{"version", 1}, {"kind", "loglaw"}, {"seed", 7}, {"threads", 3},
                  {"params", {{"c0", 0.2}}}, {"settings", {{"targets", 4}, {"flow", false}}}};
  const auto once = serialize_config(parse_config(j));
  const auto twice = serialize_config(parse_config(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once["settings"]["targets"], 4);
  EXPECT_DOUBLE_EQ(once["params"]["c0"].get<double>(), 0.2);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"colour", 1}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"settings", {{"binz", 8}}}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"params", {{"s", 1.2}}}}), ValidationError);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(parse_config(json{{"kind", "ulam"}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 2}, {"kind", "ulam"}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "fly"}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"settings", {{"bins", "many"}}}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"settings", {{"bins", 0}}}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"map", "rovella_F"}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"seed", -3}}), ValidationError);
  EXPECT_THROW(parse_config(json{{"version", 1}, {"kind", "ulam"}, {"params", {{"lambda1", -1.0}}}}), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ValidationError);
}

TEST(Io, CsvFormatting) {
  const auto d = fresh_dir("csv");
  {
    CsvWriter w(d / "t.csv", {"a", "b", "c"});
    w.row(std::size_t{3}, 0.1, true);
    w.row(-2, 1.0, false);
    EXPECT_THROW(w.row(1, 2), std::logic_error);
  }
  EXPECT_EQ(slurp(d / "t.csv"), "a,b,c\n3,0.10000000000000001,1\n-2,1,0\n");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(Run, UlamDoublingIsUniform) {
  const auto d = fresh_dir("ulam16");
  const auto sum = run_experiment(config_in({{"kind", "ulam"}, {"map", "doubling"}, {"settings", {{"bins", 16}}}}, d));
  EXPECT_TRUE(sum["checks"]["ulam_doubling_uniform_n16"].get<bool>());
  EXPECT_TRUE(sum["checks"]["ulam_rows_stochastic_doubling_n16"].get<bool>());
  std::ifstream in(d / "density.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,value");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_NEAR(std::stod(line.substr(line.find(',') + 1)), 1.0, 1e-10);
    ++rows;
  }
  EXPECT_EQ(rows, 16);
  EXPECT_TRUE(fs::exists(d / "config.json"));
  EXPECT_TRUE(fs::exists(d / "summary.json"));
  EXPECT_TRUE(fs::exists(d / "density.svg"));
  EXPECT_EQ(read_json(d / "config.json"), serialize_config(parse_config(read_json(d / "config.json"))));
}

TEST(Run, ConstantObservableSkipsFit) {
  const auto d = fresh_dir("corr_one");
  const auto sum = run_experiment(config_in(
      {{"kind", "corr"}, {"settings", {{"ensemble", 2000}, {"chains", 8}, {"burn_in", 100}, {"max_lag", 5}, {"g", "one"}}}}, d));
  EXPECT_EQ(sum["fit"], "skipped");
  EXPECT_TRUE(sum["all_zero"].get<bool>());
  EXPECT_EQ(read_json(d / "summary.json")["fit"], "skipped");
}

TEST(Run, UnknownObservableIsValidationError) {
  const auto d = fresh_dir("corr_bad");
  EXPECT_THROW(run_experiment(config_in({{"kind", "corr"}, {"settings", {{"ensemble", 100}, {"f", "z"}}}}, d)), ValidationError);
}

TEST(Run, OutputsIndependentOfThreadCount) {
  const std::vector<json> cfgs{
      {{"kind", "corr"}, {"settings", {{"ensemble", 3000}, {"chains", 8}, {"burn_in", 200}, {"max_lag", 6}}}},
      {{"kind", "conv"}, {"map", "rovella_T"}, {"settings", {{"ensemble", 3000}, {"chains", 8}, {"burn_in", 200}, {"max_lag", 6}}}},
      {{"kind", "loglaw"},
       {"settings",
        {{"targets", 3}, {"starts", 12}, {"k_min", 2}, {"k_max", 7}, {"flow_k_max", 6}, {"cloud", 20000}, {"chains", 8},
         {"burn_in", 200}, {"cap", 200000}, {"flow_cap", 1e6}}}},
      {{"kind", "simulate"},
       {"settings", {{"n", 2000}, {"tail_orbits", 300}, {"tail_length", 400}, {"log_integral_lengths", {100, 1000}}}}},
      {{"kind", "ulam"}, {"settings", {{"bins", 256}, {"samples_per_bin", 16}}}},
  };
  for (std::size_t k = 0; k < cfgs.size(); ++k) {
    std::vector<fs::path> dirs;
    for (unsigned t : {1u, 4u, 8u}) {
      auto j = cfgs[k];
      j["threads"] = t;
      dirs.push_back(fresh_dir("det" + std::to_string(k) + "_" + std::to_string(t)));
      run_experiment(config_in(j, dirs.back()));
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      if (e.path().extension() != ".csv") continue;
      const auto ref = slurp(e.path());
      EXPECT_FALSE(ref.empty());
      for (std::size_t i = 1; i < dirs.size(); ++i)
        EXPECT_EQ(ref, slurp(dirs[i] / e.path().filename())) << cfgs[k]["kind"] << " " << e.path().filename();
    }
  }
}

TEST(Report, EmptyDirectoryListsMissingInputs) {
  const auto d = fresh_dir("report_empty");
  try {
    build_report(d);
    FAIL() << "expected MissingInputError";
  } catch (const MissingInputError& e) {
    EXPECT_EQ(e.missing().size(), criterion_rules().size());
  }
  EXPECT_THROW(build_report(d / "absent"), MissingInputError);
}

TEST(Report, PartialInputsAreNotRun) {
  const auto d = fresh_dir("report_partial");
  for (unsigned t : {1u, 3u})
    run_experiment(config_in({{"kind", "ulam"}, {"map", "doubling"}, {"threads", t}, {"settings", {{"bins", 2}}}},
                             d / ("n2_t" + std::to_string(t))));
  const auto rep = build_report(d);
  EXPECT_EQ(rep["criteria"]["4"]["status"], "not-run");
  EXPECT_EQ(rep["criteria"]["1"]["status"], "not-run");
  EXPECT_EQ(rep["criteria"]["11"]["status"], "pass");
  EXPECT_FALSE(report_has_failure(rep));
}

TEST(Report, FailedCheckFailsCriterion) {
  const auto d = fresh_dir("report_fail");
  fs::create_directories(d / "a");
  write_json(d / "a" / "summary.json", json{{"kind", "norms"}, {"checks", {{"mollifier", false}}}});
  const auto rep = build_report(d);
  EXPECT_EQ(rep["criteria"]["2"]["status"], "fail");
  EXPECT_TRUE(report_has_failure(rep));
}

TEST(Cli, ExitCodes) {
  const auto d = fresh_dir("cli");
  EXPECT_EQ(cli(""), 2);
  EXPECT_EQ(cli("run --config " + (d / "missing.json").string()), 2);

  write_json(d / "bad.json", json{{"version", 1}, {"kind", "fly"}});
  EXPECT_EQ(cli("run --config " + (d / "bad.json").string()), 2);

  write_json(d / "ok.json", json{{"version", 1}, {"kind", "ulam"}, {"map", "doubling"}, {"settings", {{"bins", 8}}}});
  EXPECT_EQ(cli("run --config " + (d / "ok.json").string() + " --out " + (d / "runs" / "ok").string() + " --threads 2"), 0);
  EXPECT_TRUE(fs::exists(d / "runs" / "ok" / "density.csv"));
  EXPECT_EQ(cli("report " + (d / "runs").string() + " --strict"), 0);
  EXPECT_TRUE(fs::exists(d / "runs" / "report.json"));

  write_json(d / "slow.json", json{{"version", 1}, {"kind", "ulam"}, {"settings", {{"bins", 64}, {"max_iter", 1}, {"tol", 1e-300}}}});
  EXPECT_EQ(cli("run --config " + (d / "slow.json").string() + " --out " + (d / "slow").string()), 3);

  fs::create_directories(d / "empty");
  EXPECT_EQ(cli("report " + (d / "empty").string()), 2);

  fs::create_directories(d / "failing" / "a");
  write_json(d / "failing" / "a" / "summary.json", json{{"checks", {{"norm_inequalities", false}}}});
  EXPECT_EQ(cli("report " + (d / "failing").string()), 0);
  EXPECT_EQ(cli("report " + (d / "failing").string() + " --strict"), 4);
}
