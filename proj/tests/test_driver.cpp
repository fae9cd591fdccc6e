#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "maflow/driver.hpp"
#include "maflow/functionals.hpp"
#include "maflow/snapshot.hpp"
#include "support.hpp"

using namespace maflow;
using namespace maflow::test;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

PointMatrix scaled_identity(int n, double s) { return PointMatrix(s * PointMatrix::Identity(n, n)); }

Coefficients<double> coeff2(double b1, double b2) {
  Eigen::VectorXd b(2);
  b << b1, b2;
  return Coefficients<double>::from_b(b);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json small_preset(const std::string& name) {
  json j = preset_config(name);
  j["resolution"] = 8;
  return j;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("manufactured psi") {
  const TorusGrid grid(2, 8);
  const BackgroundMetric g = BackgroundMetric::identity(2);
  const ScalarField zero(grid);
  const ScalarField one = manufacture_psi(zero, HermitianField::constant(grid, scaled_identity(2, 1)), g, coeff2(0, 1));
  CHECK((one.values.array() - 1.0).abs().maxCoeff() <= 1e-15);

  const HermitianField two = HermitianField::constant(grid, scaled_identity(2, 2));
  const ScalarField c = manufacture_psi(zero, two, g, coeff2(1, 1));
  CHECK((c.values.array() - 4.0 / 3.0).abs().maxCoeff() <= 1e-15);
  CHECK(c[0] == doctest::Approx(invariant_c(two, g, coeff2(1, 1))));

  FlowConfig f;
  f.coeff = coeff2(1, 1);
  f.g = g;
  f.chi = two;
  const ScalarField u_star = single_mode(2, 0, 1, 0.1).sample(grid);
  f.psi = manufacture_psi(u_star, f.chi, g, f.coeff);
  f.prepare();
  CHECK(rhs_log(make_state(f, u_star), f).values.cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(manufacture_psi(single_mode(2, 0, 1, 40.0).sample(grid), two, g, f.coeff), DomainError);
}

TEST_CASE("concavity sampling") {
  for (int n = 2; n <= 5; ++n) {
    const ConcavitySummary s = concavity_sample(n, 10000, 7);
    CHECK(s.n == n);
    CHECK(s.samples == 10000);
    CHECK(s.worst_quadratic <= 1e-8);
    CHECK(s.worst_gap_upper >= -1e-10);
    CHECK(s.worst_gap_lower >= -1e-10);
    CHECK(s.max_monge_ampere_defect <= 1e-10);
  }
  const ConcavitySummary a = concavity_sample(3, 500, 11);
  const ConcavitySummary b = concavity_sample(3, 500, 11);
  CHECK(a.worst_quadratic == b.worst_quadratic);
  CHECK(a.worst_gap_upper == b.worst_gap_upper);
  CHECK_THROWS_AS(concavity_sample(6, 10, 0), ArgumentError);
  CHECK_THROWS_AS(concavity_sample(2, 0, 0), ArgumentError);
}

TEST_CASE("series output") {
  TempDir dir("maflow_test_series");
  const std::vector<std::string> leading = {"t",     "dt",       "osc_u",      "osc_dtu",      "J",
                                            "I",     "Jhat",     "c",          "residual",     "b_running",
                                            "min_margin", "w_max", "gradnorm_max", "properness_pairing"};
  const auto columns = series_columns();
  REQUIRE(columns.size() >= leading.size());
  for (std::size_t i = 0; i < leading.size(); ++i) CHECK(columns[i] == leading[i]);

  emit_series(dir.path / "empty.csv", {});
  const std::string text = slurp(dir.path / "empty.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(read_series(dir.path / "empty.csv").rows.empty());

  std::vector<DiagnosticsRecord> records(3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].step = i;
    records[i].t = 0.1 * static_cast<double>(i) + 1.0 / 3.0;
    records[i].J = -std::exp(-static_cast<double>(i)) / 7.0;
    records[i].osc_dtu = std::nextafter(1e-7, 1.0);
    records[i].max_principle_ok = i != 1;
  }
  emit_series(dir.path / "s.csv", records);
  const SeriesTable table = read_series(dir.path / "s.csv");
  REQUIRE(table.rows.size() == 3);
  CHECK(table.columns == columns);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(table.column("t")[i] == records[i].t);
    CHECK(table.column("J")[i] == records[i].J);
    CHECK(table.column("osc_dtu")[i] == records[i].osc_dtu);
  }
  CHECK_THROWS_AS(table.column("nope"), DataError);
  CHECK_THROWS_AS(emit_series(dir.path / "missing" / "dir" / "s.csv", records), DataError);
  CHECK_THROWS_AS(read_series(dir.path / "absent.csv"), DataError);
}

TEST_CASE("presets pass or fail their checks as labelled") {
  const auto names = preset_names();
  CHECK(names.size() >= 6);
  for (const std::string& name : names) {
    CAPTURE(name);
    const ExperimentConfig cfg = parse_experiment(small_preset(name));
    CHECK(cfg.preset == name);
    CHECK_FALSE(cfg.checks.empty());
    const PreflightResult pre = preflight(cfg);
    const bool negative = name.rfind("negative_", 0) == 0;
    CHECK(pre.ok == !negative);
  }
  CHECK_THROWS_AS(preset_config("nonexistent"), ArgumentError);

  const ExperimentConfig kahler = parse_experiment(small_preset("kahler"));
  CHECK(kahler.flow.prepared());
  CHECK(kahler.flow.c == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(kahler.flow.psi.min() == doctest::Approx(kahler.flow.c));
  CHECK(kahler.flow.kind == FlowKind::LogQuotient);
  CHECK(parse_experiment(small_preset("jflow")).flow.kind == FlowKind::GeneralizedJ);
}

TEST_CASE("configuration errors") {
  json j = small_preset("kahler");
  auto expect_argument_error = [](json bad) { CHECK_THROWS_AS(parse_experiment(bad), ArgumentError); };
  expect_argument_error([&] { json b = j; b.erase("n"); return b; }());
  expect_argument_error([&] { json b = j; b["resolution"] = 12; return b; }());
  expect_argument_error([&] { json b = j; b["b"] = {1, 1, 1}; return b; }());
  expect_argument_error([&] { json b = j; b["b"] = "one"; return b; }());
  expect_argument_error([&] { json b = j; b["psi"]["kind"] = "mystery"; return b; }());
  expect_argument_error([&] { json b = j; b["flow"]["kind"] = "sideways"; return b; }());
  expect_argument_error([&] { json b = j; b["checks"] = {"everything"}; return b; }());
  expect_argument_error([&] { json b = j; b["snapshot_every"] = -1; return b; }());
  expect_argument_error([&] { json b = j; b["flow"]["dt_init"] = 5.0; return b; }());
  json neg = j;
  neg["chi"]["chi0"] = {{-1, 0}, {0, 1}};
  CHECK_THROWS(parse_experiment(neg));
  CHECK_THROWS_AS(load_experiment("/nonexistent/config.json"), DataError);
}

TEST_CASE("configuration files and relative snapshot paths") {
  TempDir dir("maflow_test_config");
  const TorusGrid grid(2, 8);
  const ScalarField psi = ScalarField::constant(grid, 1.5);
  write_snapshot(dir.path / "psi.bin", psi, 0.0);
  json j = small_preset("kahler");
  j["psi"] = {{"kind", "snapshot"}, {"path", "psi.bin"}};
  j["checks"] = json::array();
  {
    std::ofstream out(dir.path / "config.json");
    out << j.dump(2);
  }
  const ExperimentConfig cfg = load_experiment(dir.path / "config.json");
  CHECK(cfg.flow.psi.values == psi.values);
  CHECK(fs::path(cfg.source["psi"]["path"].get<std::string>()).is_absolute());

  j["resolution"] = 16;
  {
    std::ofstream out(dir.path / "config.json");
    out << j.dump(2);
  }
  CHECK_THROWS_AS(load_experiment(dir.path / "config.json"), DataError);
}

TEST_CASE("runs are reproducible byte for byte") {
  TempDir dir("maflow_test_runs");
  json j = small_preset("kahler");
  j["flow"]["max_steps"] = 30;
  j["snapshot_every"] = 10;
  const ExperimentConfig cfg = parse_experiment(j);
  const ExperimentOutcome a = run_experiment(cfg, dir.path / "a");
  const ExperimentOutcome b = run_experiment(cfg, dir.path / "b");
  REQUIRE(a.run);
  REQUIRE(b.run);
  for (const char* file : {"series.csv", "u_final.bin", "status.json", "config.json"})
    CHECK(slurp(dir.path / "a" / file) == slurp(dir.path / "b" / file));
  std::size_t snapshots = 0;
  for (const auto& entry : fs::directory_iterator(dir.path / "a" / "snapshots")) {
    ++snapshots;
    CHECK(slurp(entry.path()) == slurp(dir.path / "b" / "snapshots" / entry.path().filename()));
  }
  CHECK(snapshots == 4);
  CHECK(read_series(dir.path / "a" / "series.csv").rows.size() == 31);
  // a run stopped by the step limit has no limit to report
  CHECK_THROWS_AS(report_run(dir.path / "a"), StateError);
}

TEST_CASE("hypothesis failures stop the run unless forced") {
  TempDir dir("maflow_test_negative");
  json j = small_preset("negative_cone");
  j["flow"]["max_steps"] = 5;
  const ExperimentConfig cfg = parse_experiment(j);
  const ExperimentOutcome refused = run_experiment(cfg, dir.path / "refused");
  CHECK_FALSE(refused.preflight.ok);
  CHECK_FALSE(refused.run);
  CHECK(json::parse(slurp(dir.path / "refused" / "status.json"))["status"] == "hypothesis_failed");
  CHECK_FALSE(fs::exists(dir.path / "refused" / "series.csv"));

  const ExperimentOutcome forced = run_experiment(cfg, dir.path / "forced", true);
  CHECK(forced.run);
}

TEST_CASE("report of a converged run") {
  TempDir dir("maflow_test_report");
  json j = small_preset("manufactured");
  j["flow"]["residual_tol"] = 1e-8;
  const ExperimentConfig cfg = parse_experiment(j);
  const ExperimentOutcome out = run_experiment(cfg, dir.path);
  REQUIRE(out.run);
  REQUIRE(out.run->termination == Termination::Converged);
  const json report = report_run(dir.path);
  CHECK(std::abs(report["limit"]["b_estimate"].get<double>()) <= 1e-6);
  CHECK(report["limit"]["elliptic_residual"].get<double>() <= 1e-6);
  CHECK(report["decay"]["c0"].get<double>() > 0.0);
  CHECK(fs::exists(dir.path / "u_infty.bin"));

  // the recovered potential matches u* up to its mean
  const auto u_inf = std::get<ScalarField>(read_snapshot(dir.path / "u_infty.bin").field);
  const ScalarField u_star = normalize_tilde(cfg.u_star->sample(u_inf.grid), cfg.flow.g).first;
  CHECK(sup_diff(u_inf, u_star) <= 1e-4);
}
