// Command-line front end: point evaluation, measure-only mode, parameter
// sweeps, measurement-noise Monte Carlo, and the stability verdict. All
// subcommands print machine-parseable JSON (or CSV where it applies).
// Exit codes: 0 success, 2 configuration/parse error, 3 model error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "entangler/config.hpp"
#include "entangler/constants.hpp"
#include "entangler/duan.hpp"
#include "entangler/mc.hpp"
#include "entangler/measures.hpp"
#include "entangler/model.hpp"
#include "entangler/sweep.hpp"

namespace {

using nlohmann::json;
using namespace entangler;

constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;

std::string duan_status_name(DuanStatus s) {
  switch (s) {
    case DuanStatus::Ok: return "ok";
    case DuanStatus::NoRealSolution: return "no_real_solution";
    case DuanStatus::DegenerateBlock: return "degenerate_block";
    case DuanStatus::NoConvergence: return "no_convergence";
    case DuanStatus::DegenerateState: return "degenerate_state";
    case DuanStatus::NotApplicable: return "not_applicable";
  }
  return "?";
}

std::string measure_status_name(MeasureStatus s) {
  switch (s) {
    case MeasureStatus::Ok: return "ok";
    case MeasureStatus::NonPhysicalInput: return "non_physical_input";
    case MeasureStatus::WrongNormalization: return "wrong_normalization";
  }
  return "?";
}

json matrix_json(const CovarianceMatrix& V) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) row.push_back(V(i, k));
    rows.push_back(row);
  }
  return {{"normalization", V.normalization() == Normalization::VacuumHalf
                                ? "vacuum_half"
                                : "vacuum_one"},
          {"entries", rows}};
}

json duan_json(const DuanReport& report) {
  json j;
  j["status"] = duan_status_name(report.status);
  if (report.status == DuanStatus::Ok) {
    j["R"] = report.R;
    j["entangled"] = report.entangled;
    j["residual_c1"] = report.residual_c1;
    j["residual_c2"] = report.residual_c2;
    j["substandard"] = {{"n", report.sub.n},
                        {"m", report.sub.m},
                        {"c", report.sub.c},
                        {"c_prime", report.sub.c_prime}};
    j["standard_form"] = {{"n1", report.form.n1}, {"n2", report.form.n2},
                          {"m1", report.form.m1}, {"m2", report.form.m2},
                          {"c1", report.form.c1}, {"c2", report.form.c2},
                          {"r1", report.form.r1}, {"r2", report.form.r2}};
  }
  return j;
}

json stability_json(const StabilityReport& report) {
  return {{"stable", report.stable},
          {"margin", report.margin},
          {"max_growth_rate", report.max_growth_rate},
          {"grid_refined", report.grid_refined}};
}

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  int workers = 0;
  std::uint64_t seed = 1;
  bool csv = false;
};

SimConfig load_or_default(const GlobalArgs& args) {
  if (args.config_path.empty()) {
    SimConfig cfg;
    validate_config(cfg);
    return cfg;
  }
  return load_config(args.config_path);
}

void emit(const GlobalArgs& args, const std::string& text) {
  if (args.out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(args.out_path);
  if (!out) throw ConfigError("cannot write output file: " + args.out_path);
  out << text << "\n";
}

int cmd_point(const GlobalArgs& args, double frequency_hz) {
  SimConfig cfg = load_or_default(args);
  double omega = 2.0 * constants::pi * frequency_hz;

  CovarianceMatrix v = output_covariance(cfg, omega);
  MeasureResult en = log_negativity(v);
  DuanReport duan = duan_check(v);
  StabilityReport stability = stability_check(cfg);

  json j;
  j["frequency_hz"] = frequency_hz;
  j["V"] = matrix_json(v);
  j["E_N"] = en.value;
  j["E_N_status"] = measure_status_name(en.status);
  if (duan.status == DuanStatus::Ok) j["duan_R"] = duan.R;
  j["duan_status"] = duan_status_name(duan.status);
  if (cfg.temperature > 0.0)
    j["qt_ratio"] = quantum_thermal_ratio(cfg, omega);
  j["stability"] = stability_json(stability);
  emit(args, j.dump(2));
  return 0;
}

int cmd_measure(const GlobalArgs& args, const std::string& matrix_path) {
  CovarianceMatrix v = load_cm(matrix_path);
  ValidationReport validation = validate_cm(v);
  CovarianceMatrix half = rescale(v, Normalization::VacuumHalf);
  MeasureResult en = log_negativity(half);
  MeasureResult nu = ppt_symplectic_eigenvalue(half);
  DuanReport duan = duan_check(v);

  json j;
  j["E_N"] = en.value;
  j["E_N_bits"] = nats_to_bits(en.value);
  j["E_N_status"] = measure_status_name(en.status);
  j["nu_tilde"] = nu.value;
  j["validation"] = {{"physical", validation.physical},
                     {"symmetry_residual", validation.symmetry_residual},
                     {"min_eigenvalue", validation.min_eigenvalue}};
  j["duan"] = duan_json(duan);
  emit(args, j.dump(2));
  return 0;
}

int cmd_sweep(const GlobalArgs& args, const std::vector<std::string>& axis_specs,
              double frequency_hz) {
  SimConfig cfg = load_or_default(args);
  std::vector<SweepAxis> axes;
  for (const auto& spec : axis_specs) axes.push_back(parse_axis(spec));

  SweepResult result = run_sweep(cfg, axes, frequency_hz, args.workers);

  std::string base = args.out_path.empty() ? "sweep" : args.out_path;
  {
    std::ofstream csv(base + ".csv");
    if (!csv) throw ConfigError("cannot write " + base + ".csv");
    csv << sweep_to_csv(result);
  }
  {
    std::ofstream js(base + ".json");
    if (!js) throw ConfigError("cannot write " + base + ".json");
    js << sweep_to_json(result) << "\n";
  }

  if (args.csv) {
    std::cout << sweep_to_csv(result);
    return 0;
  }
  PeakResult peak = find_peak(result);
  json j;
  j["files"] = {base + ".csv", base + ".json"};
  j["peak"] = {{"value", peak.value},
               {"location", peak.location},
               {"all_zero", peak.all_zero}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_mc(const GlobalArgs& args, const std::string& matrix_path, double sigma,
           long samples, bool absolute_sigma, double frequency_hz,
           const std::string& draws_csv) {
  CovarianceMatrix v = [&] {
    if (!matrix_path.empty())
      return rescale(load_cm(matrix_path), Normalization::VacuumHalf);
    SimConfig cfg = load_or_default(args);
    return output_covariance(cfg, 2.0 * constants::pi * frequency_hz);
  }();

  McConfig mc;
  mc.sigma = sigma;
  mc.samples = samples;
  mc.seed = args.seed;
  mc.absolute_sigma = absolute_sigma;

  std::vector<double> draws;
  McResult result =
      en_distribution(v, mc, args.workers, draws_csv.empty() ? nullptr : &draws);

  if (!draws_csv.empty()) {
    std::ofstream out(draws_csv);
    if (!out) throw ConfigError("cannot write " + draws_csv);
    out << "E_N\n";
    char buf[40];
    for (double value : draws) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", value);
      out << buf;
    }
  }

  json j;
  j["mean"] = result.mean_en;
  j["std"] = result.std_en;
  j["ci67"] = {result.ci67_low, result.ci67_high};
  j["clamped_fraction"] = result.clamped_fraction;
  j["samples"] = result.samples;
  j["sigma"] = result.sigma;
  emit(args, j.dump(2));
  return 0;
}

int cmd_stability(const GlobalArgs& args) {
  SimConfig cfg = load_or_default(args);
  emit(args, stability_json(stability_check(cfg)).dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-carrier optomechanical entanglement simulator"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "TOML config file")
      ->configurable(false);
  app.add_option("--out", args.out_path, "Output file (or prefix for sweep)");
  app.add_option("--workers", args.workers, "Worker threads (0 = auto)");
  app.add_option("--seed", args.seed, "RNG seed");
  app.add_flag("--csv", args.csv, "Emit CSV instead of JSON where applicable");
  app.fallthrough();

  double frequency_hz = 20000.0;
  auto* point = app.add_subcommand("point", "Evaluate one operating point");
  point->add_option("--frequency", frequency_hz, "Sideband frequency, Hz");

  std::string matrix_path;
  auto* measure =
      app.add_subcommand("measure", "Entanglement measures of a stored matrix");
  measure->add_option("matrix", matrix_path, "Covariance matrix file")
      ->required();

  std::vector<std::string> axis_specs;
  double sweep_frequency_hz = 20000.0;
  auto* sweep = app.add_subcommand("sweep", "Gridded parameter sweep");
  sweep->add_option("axes", axis_specs, "1-2 specs param:scale:start:stop:points")
      ->expected(1, 2)
      ->required();
  sweep->add_option("--frequency", sweep_frequency_hz,
                    "Evaluation frequency when no frequency axis, Hz");

  double sigma = 0.01;
  long samples = 10000;
  bool absolute_sigma = false;
  double mc_frequency_hz = 20000.0;
  std::string mc_matrix_path, draws_csv;
  auto* mc = app.add_subcommand("mc", "Measurement-noise Monte Carlo");
  mc->add_option("--matrix", mc_matrix_path, "Covariance matrix file");
  mc->add_option("--sigma", sigma, "Per-entry noise std (relative by default)");
  mc->add_option("--samples", samples, "Number of draws");
  mc->add_flag("--absolute-sigma", absolute_sigma, "Sigma in absolute units");
  mc->add_option("--frequency", mc_frequency_hz,
                 "Model evaluation frequency when no matrix given, Hz");
  mc->add_option("--draws-csv", draws_csv, "Write every draw to this CSV");

  auto* stability = app.add_subcommand("stability", "Optical-spring stability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : kExitConfig;
  }

  try {
    if (point->parsed()) return cmd_point(args, frequency_hz);
    if (measure->parsed()) return cmd_measure(args, matrix_path);
    if (sweep->parsed()) return cmd_sweep(args, axis_specs, sweep_frequency_hz);
    if (mc->parsed())
      return cmd_mc(args, mc_matrix_path, sigma, samples, absolute_sigma,
                    mc_frequency_hz, draws_csv);
    if (stability->parsed()) return cmd_stability(args);
  } catch (const ModelError& err) {
    std::cerr << "model error: " << err.what() << "\n";
    return kExitModel;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
