#pragma once

// Experiment configuration, presets, manufactured solutions and output files.
//
// Configuration schema (JSON):
//
//   {
//     "preset": "kahler",                      optional label
//     "n": 2, "resolution": 16,                 resolution is a power of two >= 8
//     "period": 6.283185307179586,              optional, default 2 pi
//     "b": [1, 1],                              b_1..b_n
//     "g": [[1, 0], [0, 1]],                    optional; real rows or {"re": rows, "im": rows}
//     "chi": {"chi0": [[2, 0], [0, 2]], "rho": <trig>}
//          | {"chi0": ..., "rho": {"random": {"modes": 4, "amplitude": 0.05, "max_wavenumber": 2}}}
//          | {"snapshot": "chi.bin"},
//     "psi": {"kind": "constant-c" | "constant" | "manufactured" | "snapshot",
//             "value": 1.0, "u_star": <trig>, "path": "psi.bin",
//             "log_factor": <trig>},            psi is multiplied by exp(log_factor)
//     "witness": {"chi0": ..., "rho": ...},     optional chi_v for the cone check, default chi
//     "flow": {"kind": "log-quotient" | "j-flow", "dt_init": 0.01, "dt_max": 1.0,
//              "safety": 0.4, "t_max": 400, "residual_tol": 1e-7, "record_every": 1,
//              "max_steps": 100000},
//     "checks": ["cone", "degeneracy", "psi_geq_c"],
//     "seed": 0,
//     "snapshot_every": 0                       records between snapshots, 0 = none
//   }
//
//   <trig> = {"constant": 0.0, "modes": [{"amplitude": 0.1, "wavevector": [1, 0, 0, 0], "kind": "cos"}]}
//
// Relative paths are resolved against the directory of the configuration file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maflow/flow.hpp"
#include "maflow/trig.hpp"

namespace maflow {

struct ExperimentConfig {
  std::string preset;
  std::uint64_t seed = 0;
  int snapshot_every = 0;
  std::vector<std::string> checks;
  std::optional<HermitianField> witness;
  std::optional<TrigPolynomial> u_star;
  FlowConfig flow;         // prepared
  nlohmann::json source;   // the configuration with paths made absolute
};

ExperimentConfig parse_experiment(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

std::vector<std::string> preset_names();
/// Configuration JSON of a named preset; ArgumentError for unknown names.
nlohmann::json preset_config(const std::string& name);

/// psi = S_n / sum_a c_a S_{n-a} at the spectrum of chi + d dbar u*, so that
/// (u*, b = 0) solves the elliptic system exactly on the grid.
ScalarField manufacture_psi(const ScalarField& u_star, const HermitianField& chi, const BackgroundMetric& g,
                            const Coefficients<double>& coeff);

struct ConcavitySummary {
  int n = 0;
  int samples = 0;
  double worst_quadratic = 0.0;      // max eta^T B eta / (1 + |B|), |eta| = 1
  double worst_gap_upper = 0.0;      // min (lhs - mid), |xi| = 1
  double worst_gap_lower = 0.0;      // min mid
  double worst_relative_gap = 0.0;   // min (lhs - mid) / (|lhs| + |mid|)
  double max_monge_ampere_defect = 0.0;  // |B + diag(1/lambda^2)| for b = (0, ..., 0, 1)
};

/// Random lambda in (0.1, 10)^n, random nonnegative b, random eta and xi.
ConcavitySummary concavity_sample(int n, int samples, std::uint64_t seed);

/// Column names of series.csv, in order.
std::vector<std::string> series_columns();
void emit_series(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
};
SeriesTable read_series(const std::filesystem::path& path);

struct PreflightResult {
  bool ok = true;
  nlohmann::json details = nlohmann::json::object();
};
/// Runs every hypothesis check named in config.checks.
PreflightResult preflight(const ExperimentConfig& config);

struct ExperimentOutcome {
  PreflightResult preflight;
  std::optional<RunResult> run;  // empty when preflight failed and was not forced
};

/// Preflight, flow, and the output directory: config.json, series.csv,
/// status.json, u_final.bin and snapshots/ every snapshot_every records.
ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                 bool force = false);

/// LimitReport and DecayFit of a finished run directory as JSON; also writes
/// u_infty.bin into that directory.
nlohmann::json report_run(const std::filesystem::path& run_dir);

const char* termination_name(Termination t);

}  // namespace maflow
