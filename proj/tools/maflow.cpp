// Command line front end: run, cone, report, concavity, manufacture, preset.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

#include "maflow/cone.hpp"
#include "maflow/driver.hpp"
#include "maflow/errors.hpp"
#include "maflow/snapshot.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitStiff = 3;

using nlohmann::json;

int cmd_run(const std::string& config_path, const std::string& out_dir, bool force) {
  const maflow::ExperimentConfig cfg = maflow::load_experiment(config_path);
  const maflow::ExperimentOutcome outcome = maflow::run_experiment(cfg, out_dir, force);
  if (!outcome.run) {
    std::cerr << "hypothesis check failed: " << outcome.preflight.details.dump() << '\n';
    return kExitHypothesis;
  }
  const auto& r = *outcome.run;
  const json summary = {{"termination", maflow::termination_name(r.termination)},
                        {"t", r.state.t},
                        {"steps", r.state.steps},
                        {"osc_dtu", r.state.dtu.max() - r.state.dtu.min()},
                        {"b_running", r.state.dtu.mean()},
                        {"preflight_ok", outcome.preflight.ok}};
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_cone(const std::string& config_path) {
  const maflow::ExperimentConfig cfg = maflow::load_experiment(config_path);
  const auto& f = cfg.flow;
  const maflow::ConeReport cone = maflow::cone_check(cfg.witness.value_or(f.chi), f.psi, f.g, f.coeff);
  const maflow::HypothesisReport degeneracy = maflow::hermitian_degeneracy_check(f.chi, f.psi, f.g, f.coeff);
  const maflow::HypothesisReport psi_c = maflow::psi_geq_c_check(f.psi, f.chi, f.g, f.coeff);
  const maflow::PreflightResult required = maflow::preflight(cfg);
  const json out = {
      {"cone",
       {{"holds", cone.holds},
        {"boundary", cone.boundary},
        {"margin", cone.margin},
        {"worst_point", cone.worst_point},
        {"worst_minor", cone.worst_minor}}},
      {"degeneracy", {{"holds", degeneracy.holds}, {"slack", degeneracy.slack}, {"worst_point", degeneracy.worst_point}}},
      {"psi_geq_c", {{"holds", psi_c.holds}, {"slack", psi_c.slack}, {"worst_point", psi_c.worst_point}}},
      {"c", f.c},
      {"required", cfg.checks},
      {"required_ok", required.ok}};
  std::cout << out.dump(2) << '\n';
  return required.ok ? kExitOk : kExitHypothesis;
}

int cmd_report(const std::string& run_dir) {
  std::cout << maflow::report_run(run_dir).dump(2) << '\n';
  return kExitOk;
}

int cmd_concavity(int n, int samples, std::uint64_t seed) {
  const maflow::ConcavitySummary s = maflow::concavity_sample(n, samples, seed);
  const json out = {{"n", s.n},
                    {"samples", s.samples},
                    {"worst_quadratic", s.worst_quadratic},
                    {"worst_gap_upper", s.worst_gap_upper},
                    {"worst_gap_lower", s.worst_gap_lower},
                    {"worst_relative_gap", s.worst_relative_gap},
                    {"max_monge_ampere_defect", s.max_monge_ampere_defect}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_manufacture(const std::string& config_path, const std::string& out_path) {
  const maflow::ExperimentConfig cfg = maflow::load_experiment(config_path);
  if (!cfg.u_star) throw maflow::ArgumentError("manufacture: the configuration has no psi.u_star");
  write_snapshot(out_path, cfg.flow.psi, 0.0);
  const json out = {{"psi", out_path}, {"psi_min", cfg.flow.psi.min()}, {"psi_max", cfg.flow.psi.max()}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_preset(const std::string& name, const std::string& out_path) {
  const std::string text = maflow::preset_config(name).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::FILE* f = std::fopen(out_path.c_str(), "wb");
  if (!f) throw maflow::DataError("cannot open " + out_path + " for writing");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic flows for complex Hessian quotient equations on the flat torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, out_path, preset;
  bool force = false;
  int n = 2, samples = 10000;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "integrate a flow and write series.csv, snapshots and status.json");
  run->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--force", force, "run even when a required hypothesis check fails");

  auto* cone = app.add_subcommand("cone", "evaluate the hypothesis checks for a configuration");
  cone->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);

  auto* report = app.add_subcommand("report", "limit and decay report for a finished run directory");
  report->add_option("run_dir", run_dir, "directory written by run")->required()->check(CLI::ExistingDirectory);

  auto* concavity = app.add_subcommand("concavity", "random sampling of concavity and strong concavity");
  concavity->add_option("--n", n, "dimension")->check(CLI::Range(2, 5));
  concavity->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);
  concavity->add_option("--seed", seed, "random seed");

  auto* manufacture = app.add_subcommand("manufacture", "write the manufactured psi of a configuration");
  manufacture->add_option("config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
  manufacture->add_option("--out", out_path, "output snapshot")->required();

  auto* preset_cmd = app.add_subcommand("preset", "print a preset configuration");
  preset_cmd->add_option("name", preset, "preset name")->required()->check(CLI::IsMember(maflow::preset_names()));
  preset_cmd->add_option("--out", out_path, "write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, force);
    if (*cone) return cmd_cone(config_path);
    if (*report) return cmd_report(run_dir);
    if (*concavity) return cmd_concavity(n, samples, seed);
    if (*manufacture) return cmd_manufacture(config_path, out_path);
    if (*preset_cmd) return cmd_preset(preset, out_path);
  } catch (const maflow::StiffnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStiff;
  } catch (const maflow::AdmissibilityError& e) {
    std::cerr << "error: " << e.what() << " (point " << e.point() << ")\n";
    return kExitStiff;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
