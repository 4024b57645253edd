// Command-line front end: `rovella run --config FILE` and `rovella report DIR`.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rovella/rovella.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitAcceptance = 4;

int emit_error(const std::string& type, const std::string& message, const nlohmann::json& extra = {}) {
  nlohmann::json err = {{"error", {{"type", type}, {"message", message}}}};
  if (!extra.is_null()) err["error"].update(extra);
  std::cerr << err.dump(2) << '\n';
  return type == "validation" ? kExitValidation : kExitRuntime;
}

int do_report(const std::filesystem::path& dir, bool strict, const std::string& out_file) {
  const auto rep = rovella::build_report(dir);
  const std::filesystem::path target = out_file.empty() ? dir / "report.json" : std::filesystem::path(out_file);
  rovella::write_json(target, rep);
  std::cout << rep.dump(2) << '\n';
  return strict && rovella::report_has_failure(rep) ? kExitAcceptance : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contracting Lorenz map laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("--config", config_path, "Config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Master seed (overrides the file)");
  auto* threads_opt = run->add_option("--threads", threads, "Worker count (fallback: ROVELLA_THREADS)");
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides the file)");

  std::string report_dir;
  bool strict = false;
  auto* report = app.add_subcommand("report", "Collate experiment outputs below DIR");
  report->add_option("dir", report_dir, "Directory of experiment outputs")->required();
  report->add_flag("--strict", strict, "Exit 4 when any criterion fails");
  report->add_option("--out", report_out, "Report file (default DIR/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return emit_error("validation", e.what());
  }

  try {
    if (*report) return do_report(report_dir, strict, report_out);

    auto cfg = rovella::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*threads_opt) cfg.threads = threads;
    if (*out_opt) cfg.output_dir = out_dir;
    if (cfg.kind == "report") {
      return do_report(cfg.settings["input_dir"].get<std::string>(), cfg.settings["strict"].get<bool>(), "");
    }
    const auto summary = rovella::run_experiment(cfg);
    std::cout << summary.dump(2) << '\n';
    return kExitOk;
  } catch (const rovella::MissingInputError& e) {
    return emit_error("validation", e.what(), {{"missing", e.missing()}});
  } catch (const rovella::ValidationError& e) {
    return emit_error("validation", e.what());
  } catch (const rovella::ConvergenceError& e) {
    return emit_error("runtime", e.what(), {{"residual", e.residual()}});
  } catch (const std::exception& e) {
    return emit_error("runtime", e.what());
  }
}
