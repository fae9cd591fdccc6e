#include "maflow/driver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "maflow/cone.hpp"
#include "maflow/convergence.hpp"
#include "maflow/errors.hpp"
#include "maflow/functionals.hpp"
#include "maflow/snapshot.hpp"

namespace maflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T get(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ArgumentError(std::string(where) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string(where) + ": bad \"" + key + "\": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const char* where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

PointMatrix parse_matrix(const json& j, int n, const char* where) {
  const bool split = j.is_object();
  const json& re = split ? j.at("re") : j;
  PointMatrix m = PointMatrix::Zero(n, n);
  auto fill = [&](const json& rows, bool imaginary) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw ArgumentError(std::string(where) + ": expected " + std::to_string(n) + " rows");
    for (int i = 0; i < n; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ArgumentError(std::string(where) + ": expected " + std::to_string(n) + " columns");
      for (int k = 0; k < n; ++k) {
        const double v = row[static_cast<std::size_t>(k)].get<double>();
        if (imaginary)
          m(i, k) += Complex(0.0, v);
        else
          m(i, k) += v;
      }
    }
  };
  fill(re, false);
  if (split && j.contains("im")) fill(j.at("im"), true);
  return m;
}

TrigPolynomial parse_trig(const json& j, int n) {
  TrigPolynomial t;
  t.constant = get_or<double>(j, "constant", 0.0, "trigonometric polynomial");
  if (!j.contains("modes")) return t;
  for (const json& m : j.at("modes")) {
    TrigMode mode;
    mode.amplitude = get<double>(m, "amplitude", "mode");
    mode.wavevector = get<std::vector<int>>(m, "wavevector", "mode");
    if (static_cast<int>(mode.wavevector.size()) != 2 * n)
      throw ArgumentError("mode: wavevector needs " + std::to_string(2 * n) + " entries");
    const std::string kind = get_or<std::string>(m, "kind", "cos", "mode");
    if (kind == "cos")
      mode.kind = TrigMode::Kind::Cos;
    else if (kind == "sin")
      mode.kind = TrigMode::Kind::Sin;
    else
      throw ArgumentError("mode: kind must be \"cos\" or \"sin\"");
    t.modes.push_back(std::move(mode));
  }
  return t;
}

TrigPolynomial random_trig(const json& j, int n, std::uint64_t seed) {
  const int count = get_or<int>(j, "modes", 4, "random");
  const double amplitude = get_or<double>(j, "amplitude", 0.05, "random");
  const int kmax = get_or<int>(j, "max_wavenumber", 2, "random");
  if (count < 0 || kmax < 1) throw ArgumentError("random: need modes >= 0 and max_wavenumber >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  std::uniform_int_distribution<int> wave(-kmax, kmax);
  std::bernoulli_distribution coin(0.5);
  TrigPolynomial t;
  for (int m = 0; m < count; ++m) {
    TrigMode mode;
    mode.amplitude = amp(rng);
    do {
      mode.wavevector.assign(static_cast<std::size_t>(2 * n), 0);
      for (int& w : mode.wavevector) w = wave(rng);
    } while (std::all_of(mode.wavevector.begin(), mode.wavevector.end(), [](int w) { return w == 0; }));
    mode.kind = coin(rng) ? TrigMode::Kind::Cos : TrigMode::Kind::Sin;
    t.modes.push_back(std::move(mode));
  }
  return t;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : fs::absolute(base / path);
}

HermitianField read_hermitian(const fs::path& path, const TorusGrid& grid) {
  Snapshot s = read_snapshot(path);
  auto* f = std::get_if<HermitianField>(&s.field);
  if (!f) throw DataError(path.string() + ": expected a hermitian snapshot");
  if (!(f->grid == grid)) throw DataError(path.string() + ": snapshot grid does not match the configuration");
  return std::move(*f);
}

ScalarField read_scalar(const fs::path& path, const TorusGrid& grid) {
  Snapshot s = read_snapshot(path);
  auto* f = std::get_if<ScalarField>(&s.field);
  if (!f) throw DataError(path.string() + ": expected a scalar snapshot");
  if (!(f->grid == grid)) throw DataError(path.string() + ": snapshot grid does not match the configuration");
  return std::move(*f);
}

HermitianField parse_chi(json& j, const TorusGrid& grid, const BackgroundMetric& g, const fs::path& base,
                         std::uint64_t seed) {
  if (j.contains("snapshot")) {
    const fs::path p = resolve(base, get<std::string>(j, "snapshot", "chi"));
    j["snapshot"] = p.string();
    return read_hermitian(p, grid);
  }
  const PointMatrix chi0 = parse_matrix(j.at("chi0"), grid.n, "chi0");
  ScalarField rho(grid);
  if (j.contains("rho")) {
    const json& r = j.at("rho");
    const TrigPolynomial t = r.contains("random") ? random_trig(r.at("random"), grid.n, seed) : parse_trig(r, grid.n);
    rho = t.sample(grid);
  }
  return build_chi(chi0, rho, g);
}

FlowKind parse_kind(const std::string& s) {
  if (s == "log-quotient") return FlowKind::LogQuotient;
  if (s == "j-flow") return FlowKind::GeneralizedJ;
  throw ArgumentError("flow: kind must be \"log-quotient\" or \"j-flow\"");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

json trig_json(std::initializer_list<std::tuple<double, std::vector<int>, const char*>> modes) {
  json m = json::array();
  for (const auto& [a, w, k] : modes) m.push_back({{"amplitude", a}, {"wavevector", w}, {"kind", k}});
  return {{"constant", 0.0}, {"modes", m}};
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::TimeLimit:
      return "time_limit";
    case Termination::StepLimit:
      return "step_limit";
  }
  return "unknown";
}

ExperimentConfig parse_experiment(const json& input, const fs::path& base_dir) {
  ExperimentConfig cfg;
  json j = input;
  cfg.preset = get_or<std::string>(j, "preset", "", "config");
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0, "config");
  cfg.snapshot_every = get_or<int>(j, "snapshot_every", 0, "config");
  if (cfg.snapshot_every < 0) throw ArgumentError("config: snapshot_every must be nonnegative");

  const int n = get<int>(j, "n", "config");
  const TorusGrid grid(n, get<int>(j, "resolution", "config"),
                       get_or<double>(j, "period", 2.0 * std::numbers::pi, "config"));
  const auto b = get<std::vector<double>>(j, "b", "config");
  if (static_cast<int>(b.size()) != n) throw ArgumentError("config: b needs n entries");
  FlowConfig& flow = cfg.flow;
  flow.coeff = Coefficients<double>::from_b(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
  flow.g = j.contains("g") ? BackgroundMetric(parse_matrix(j.at("g"), n, "g")) : BackgroundMetric::identity(n);
  flow.chi = parse_chi(j.at("chi"), grid, flow.g, base_dir, cfg.seed);
  if (j.contains("witness")) cfg.witness = parse_chi(j.at("witness"), grid, flow.g, base_dir, cfg.seed + 1);

  const json flow_json = j.value("flow", json::object());
  flow.kind = parse_kind(get_or<std::string>(flow_json, "kind", "log-quotient", "flow"));
  flow.dt_init = get_or<double>(flow_json, "dt_init", flow.dt_init, "flow");
  flow.dt_max = get_or<double>(flow_json, "dt_max", flow.dt_max, "flow");
  flow.safety = get_or<double>(flow_json, "safety", flow.safety, "flow");
  flow.t_max = get_or<double>(flow_json, "t_max", flow.t_max, "flow");
  flow.residual_tol = get_or<double>(flow_json, "residual_tol", flow.residual_tol, "flow");
  flow.record_every = get_or<int>(flow_json, "record_every", flow.record_every, "flow");
  flow.max_steps = get_or<std::size_t>(flow_json, "max_steps", flow.max_steps, "flow");

  json& psi_json = j.at("psi");
  const std::string kind = get<std::string>(psi_json, "kind", "psi");
  if (kind == "constant-c") {
    flow.psi = ScalarField::constant(grid, invariant_c(flow.chi, flow.g, flow.coeff));
  } else if (kind == "constant") {
    flow.psi = ScalarField::constant(grid, get<double>(psi_json, "value", "psi"));
  } else if (kind == "manufactured") {
    cfg.u_star = parse_trig(psi_json.at("u_star"), n);
    if (cfg.u_star->modes.size() > 8) throw ArgumentError("psi: u_star may have at most 8 modes");
    flow.psi = manufacture_psi(cfg.u_star->sample(grid), flow.chi, flow.g, flow.coeff);
  } else if (kind == "snapshot") {
    const fs::path p = resolve(base_dir, get<std::string>(psi_json, "path", "psi"));
    psi_json["path"] = p.string();
    flow.psi = read_scalar(p, grid);
  } else {
    throw ArgumentError("psi: unknown kind \"" + kind + "\"");
  }
  if (psi_json.contains("log_factor")) {
    const ScalarField factor = parse_trig(psi_json.at("log_factor"), n).sample(grid);
    flow.psi.values.array() *= factor.values.array().exp();
  }

  for (const auto& c : j.value("checks", json::array())) {
    const std::string name = c.get<std::string>();
    if (name != "cone" && name != "degeneracy" && name != "psi_geq_c")
      throw ArgumentError("checks: unknown check \"" + name + "\"");
    cfg.checks.push_back(name);
  }

  flow.prepare();
  cfg.source = std::move(j);
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path) {
  return parse_experiment(read_json(path), fs::absolute(path).parent_path());
}

std::vector<std::string> preset_names() {
  return {"kahler", "manufactured", "hermitian_degenerate", "jflow", "negative_cone", "negative_degenerate"};
}

json preset_config(const std::string& name) {
  const json chi = {{"chi0", {{2.0, 0.0}, {0.0, 2.0}}},
                    {"rho", trig_json({{0.1, {1, 0, 0, 0}, "cos"}, {0.1, {0, 0, 0, 1}, "cos"}})}};
  json base = {{"n", 2},
               {"resolution", 16},
               {"b", {1.0, 1.0}},
               {"chi", chi},
               {"seed", 0},
               {"snapshot_every", 0},
               {"flow",
                {{"kind", "log-quotient"},
                 {"dt_init", 0.01},
                 {"dt_max", 1.0},
                 {"safety", 0.4},
                 {"t_max", 1000.0},
                 {"residual_tol", 1e-7},
                 {"record_every", 1}}}};
  base["preset"] = name;
  if (name == "kahler") {
    base["psi"] = {{"kind", "constant-c"}};
    base["checks"] = {"psi_geq_c", "cone"};
  } else if (name == "manufactured") {
    base["psi"] = {{"kind", "manufactured"}, {"u_star", trig_json({{0.05, {1, 0, 0, 0}, "cos"}})}};
    base["checks"] = {"cone"};
  } else if (name == "hermitian_degenerate") {
    json factor = trig_json({{0.1, {0, 1, 0, 0}, "cos"}});
    factor["constant"] = 0.2;
    base["psi"] = {{"kind", "manufactured"}, {"u_star", trig_json({})}, {"log_factor", factor}};
    base["checks"] = {"degeneracy", "cone"};
    base["flow"]["t_max"] = 40.0;
  } else if (name == "jflow") {
    base["psi"] = {{"kind", "constant-c"}};
    base["flow"]["kind"] = "j-flow";
    base["checks"] = {"psi_geq_c", "cone"};
  } else if (name == "negative_cone") {
    base["psi"] = {{"kind", "constant"}, {"value", 10.0}};
    base["checks"] = {"cone"};
  } else if (name == "negative_degenerate") {
    json factor = trig_json({{0.1, {0, 1, 0, 0}, "cos"}});
    factor["constant"] = -0.2;
    base["psi"] = {{"kind", "manufactured"}, {"u_star", trig_json({})}, {"log_factor", factor}};
    base["checks"] = {"degeneracy"};
  } else {
    throw ArgumentError("unknown preset \"" + name + "\"");
  }
  return base;
}

ScalarField manufacture_psi(const ScalarField& u_star, const HermitianField& chi, const BackgroundMetric& g,
                            const Coefficients<double>& coeff) {
  if (!(u_star.grid == chi.grid)) throw ArgumentError("manufacture_psi: grid mismatch");
  if (coeff.n != g.n()) throw ArgumentError("manufacture_psi: dimension mismatch");
  const SpectrumField spectra = eigenvalues_rel(chi + complex_hessian(u_star), g);
  if (!(spectra.values.col(0).minCoeff() > kConeFloor))
    throw DomainError("manufacture_psi: chi + d dbar u* is not positive");
  ScalarField psi(chi.grid);
  for (std::size_t p = 0; p < psi.size(); ++p) {
    const auto e = elementary_symmetric(spectra.at(p));
    psi[p] = e(coeff.n) / weighted_lower_sum(e, coeff);
  }
  return psi;
}

ConcavitySummary concavity_sample(int n, int samples, std::uint64_t seed) {
  if (n < 2 || n > 5) throw ArgumentError("concavity_sample: n must lie in [2, 5]");
  if (samples < 1) throw ArgumentError("concavity_sample: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> order(1, n);

  ConcavitySummary s;
  s.n = n;
  s.samples = samples;
  s.worst_quadratic = -std::numeric_limits<double>::infinity();
  s.worst_gap_upper = s.worst_gap_lower = s.worst_relative_gap = std::numeric_limits<double>::infinity();

  Coefficients<double> monge_ampere;
  {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    monge_ampere = Coefficients<double>::from_b(b);
  }

  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd lambda(n), b(n), eta(n);
    Eigen::VectorXcd xi(n);
    for (int i = 0; i < n; ++i) lambda(i) = lam(rng);
    do {
      // sparse draws reach the boundary cases where some b_a vanish
      for (int i = 0; i < n; ++i) b(i) = unit(rng) < 0.3 ? 0.0 : unit(rng);
    } while (!(b.sum() > 0.0));
    for (int i = 0; i < n; ++i) eta(i) = normal(rng);
    for (int i = 0; i < n; ++i) xi(i) = Complex(normal(rng), normal(rng));
    eta.normalize();
    xi.normalize();

    const auto coeff = Coefficients<double>::from_b(b);
    const Eigen::MatrixXd hess = operator_hessian(lambda, coeff);
    const double norm = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .cwiseAbs()
                            .maxCoeff();
    s.worst_quadratic = std::max(s.worst_quadratic, eta.dot(hess * eta) / (1.0 + norm));

    const auto [upper, mid] = strong_concavity_gap(lambda, xi, order(rng));
    s.worst_gap_upper = std::min(s.worst_gap_upper, upper);
    s.worst_gap_lower = std::min(s.worst_gap_lower, mid);
    const double scale = std::abs(upper + mid) + std::abs(mid);
    s.worst_relative_gap = std::min(s.worst_relative_gap, scale > 0.0 ? upper / scale : 0.0);

    Eigen::MatrixXd defect = operator_hessian(lambda, monge_ampere);
    defect.diagonal().array() += lambda.array().square().inverse();
    s.max_monge_ampere_defect = std::max(s.max_monge_ampere_defect, defect.cwiseAbs().maxCoeff());
  }
  return s;
}

std::vector<std::string> series_columns() {
  return {"t",           "dt",          "osc_u",         "osc_dtu",     "J",
          "I",           "Jhat",        "c",             "residual",    "b_running",
          "min_margin",  "w_max",       "gradnorm_max",  "properness_pairing",
          "tilde_shift", "hat_shift",   "dtu_min",       "dtu_max",     "quotient_min",
          "quotient_max", "i_flux",     "j_flux",        "u_min",       "u_max",
          "step",        "max_principle_ok", "max_principle_violation"};
}

void emit_series(const fs::path& path, const std::vector<DiagnosticsRecord>& records) {
  std::ostringstream out;
  const auto columns = series_columns();
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  out << '\n';
  for (const DiagnosticsRecord& r : records) {
    const double row[] = {r.t,
                          r.dt,
                          r.osc_u,
                          r.osc_dtu,
                          r.J,
                          r.I,
                          r.Jhat,
                          r.c,
                          r.residual,
                          r.b_running,
                          r.min_margin,
                          r.w_max,
                          r.gradnorm_max,
                          r.properness_pairing,
                          r.tilde_shift,
                          r.hat_shift,
                          r.dtu_min,
                          r.dtu_max,
                          r.quotient_min,
                          r.quotient_max,
                          r.i_flux,
                          r.j_flux,
                          r.u_min,
                          r.u_max,
                          static_cast<double>(r.step),
                          r.max_principle_ok ? 1.0 : 0.0,
                          r.max_principle_violation};
    bool first = true;
    for (double v : row) {
      out << (first ? "" : ",") << format_double(v);
      first = false;
    }
    out << '\n';
  }
  write_text(path, out.str());
}

std::vector<double> SeriesTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DataError("series has no column \"" + name + "\"");
  const auto k = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[k]);
  return out;
}

SeriesTable read_series(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  SeriesTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty series");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": wrong number of fields");
    table.rows.push_back(std::move(row));
  }
  return table;
}

PreflightResult preflight(const ExperimentConfig& config) {
  PreflightResult result;
  const FlowConfig& f = config.flow;
  for (const std::string& name : config.checks) {
    if (name == "cone") {
      const ConeReport r = cone_check(config.witness.value_or(f.chi), f.psi, f.g, f.coeff);
      result.details["cone"] = {{"holds", r.holds},
                                {"boundary", r.boundary},
                                {"margin", r.margin},
                                {"worst_point", r.worst_point},
                                {"worst_minor", r.worst_minor}};
      result.ok = result.ok && r.holds;
    } else {
      const HypothesisReport r = name == "degeneracy" ? hermitian_degeneracy_check(f.chi, f.psi, f.g, f.coeff)
                                                      : psi_geq_c_check(f.psi, f.chi, f.g, f.coeff);
      result.details[name] = {{"holds", r.holds}, {"slack", r.slack}, {"worst_point", r.worst_point}};
      result.ok = result.ok && r.holds;
    }
  }
  return result;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, const fs::path& out_dir, bool force) {
  fs::create_directories(out_dir);
  write_text(out_dir / "config.json", config.source.dump(2) + "\n");

  ExperimentOutcome outcome;
  outcome.preflight = preflight(config);
  json status = {{"preflight", outcome.preflight.details}, {"preflight_ok", outcome.preflight.ok}};
  if (!outcome.preflight.ok && !force) {
    status["status"] = "hypothesis_failed";
    write_text(out_dir / "status.json", status.dump(2) + "\n");
    return outcome;
  }

  const fs::path snapshots = out_dir / "snapshots";
  if (config.snapshot_every > 0) fs::create_directories(snapshots);
  std::size_t count = 0;
  auto observer = [&](const DiagnosticsRecord& r, const FlowState& s) {
    if (config.snapshot_every > 0 && count % static_cast<std::size_t>(config.snapshot_every) == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "u_%08zu.bin", r.step);
      write_snapshot(snapshots / name, s.u, s.t);
    }
    ++count;
  };

  try {
    outcome.run = run(config.flow, observer);
  } catch (const std::exception& e) {
    status["status"] = "failed";
    status["error"] = e.what();
    write_text(out_dir / "status.json", status.dump(2) + "\n");
    throw;
  }
  const RunResult& r = *outcome.run;
  emit_series(out_dir / "series.csv", r.records);
  write_snapshot(out_dir / "u_final.bin", r.state.u, r.state.t);
  status["status"] = "completed";
  status["termination"] = termination_name(r.termination);
  status["t"] = r.state.t;
  status["steps"] = r.state.steps;
  status["osc_dtu"] = oscillation(r.state.dtu);
  status["b_running"] = r.state.dtu.mean();
  status["min_margin"] = r.state.margin;
  write_text(out_dir / "status.json", status.dump(2) + "\n");
  return outcome;
}

json report_run(const fs::path& run_dir) {
  const json status = read_json(run_dir / "status.json");
  if (status.value("status", "") != "completed") throw StateError("report: the run in " + run_dir.string() + " did not complete");
  const ExperimentConfig cfg = load_experiment(run_dir / "config.json");
  const Termination termination = status.value("termination", "") == "converged" ? Termination::Converged
                                                                                  : Termination::TimeLimit;

  Snapshot snap = read_snapshot(run_dir / "u_final.bin");
  auto* u = std::get_if<ScalarField>(&snap.field);
  if (!u) throw DataError("u_final.bin is not a scalar snapshot");
  const FlowState state = make_state(cfg.flow, std::move(*u), snap.time);
  const LimitReport limit = limit_report(state, cfg.flow, termination);
  write_snapshot(run_dir / "u_infty.bin", limit.u_infty, snap.time);

  json out = {{"limit",
               {{"b_estimate", limit.b_estimate},
                {"residual_sup", limit.residual_sup},
                {"osc_final", limit.osc_final},
                {"elliptic_residual", limit.elliptic_residual},
                {"u_infty", (run_dir / "u_infty.bin").string()}}}};

  const SeriesTable series = read_series(run_dir / "series.csv");
  const auto t = series.column("t");
  const auto osc = series.column("osc_dtu");
  std::vector<std::pair<double, double>> points;
  for (std::size_t k = 0; k < t.size(); ++k) points.emplace_back(t[k], osc[k]);
  try {
    const DecayFit fit = fit_decay(points);
    out["decay"] = {{"c0", fit.c0},
                    {"prefactor", fit.prefactor},
                    {"r_squared", fit.r_squared},
                    {"window", {fit.window.first, fit.window.second}},
                    {"samples", fit.samples},
                    {"decaying", fit.decaying}};
  } catch (const FitError& e) {
    out["decay"] = {{"error", e.what()}};
  }
  return out;
}

}  // namespace maflow
