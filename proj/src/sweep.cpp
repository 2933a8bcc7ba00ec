#include "entangler/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "entangler/constants.hpp"
#include "entangler/duan.hpp"
#include "entangler/measures.hpp"

namespace entangler {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void apply_override(SimConfig& cfg, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::Temperature: cfg.temperature = value; break;
    case SweepParameter::CarrierPower: cfg.carrier.circulating_power = value; break;
    case SweepParameter::SubcarrierPower:
      cfg.subcarrier.circulating_power = value;
      break;
    case SweepParameter::CarrierDetuning: cfg.carrier.detuning = value; break;
    case SweepParameter::SubcarrierDetuning:
      cfg.subcarrier.detuning = value;
      break;
    case SweepParameter::LossPpm: cfg.round_trip_loss = value; break;
    case SweepParameter::CavityLength: cfg.cavity_length = value; break;
    case SweepParameter::InputTransmissionPpm:
      cfg.input_transmission = value;
      break;
    case SweepParameter::Frequency: break;  // handled by the caller
  }
}

SweepCell evaluate_cell(const SimConfig& cfg, double frequency_hz,
                        bool stable) {
  SweepCell cell;
  cell.stable = stable;
  try {
    double omega = 2.0 * constants::pi * frequency_hz;
    CovarianceMatrix v = output_covariance(cfg, omega);
    cell.physical = validate_cm(v).physical;

    MeasureResult en = log_negativity(v);
    cell.e_n = en.value;
    if (en.status != MeasureStatus::Ok) {
      cell.physical = false;
      cell.diagnostic = "nonphysical covariance for the negativity measure";
    }

    DuanReport duan = duan_check(v);
    if (duan.status == DuanStatus::Ok) cell.duan_R = duan.R;

    if (cfg.temperature > 0.0)
      cell.qt_ratio = quantum_thermal_ratio(cfg, omega);
  } catch (const std::exception& err) {
    cell.error = true;
    cell.diagnostic = err.what();
  }
  return cell;
}

int resolve_workers(int workers, int jobs) {
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  return std::max(1, std::min(workers, jobs));
}

template <typename Fn>
void parallel_for(int jobs, int workers, Fn&& fn) {
  workers = resolve_workers(workers, jobs);
  if (workers == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < jobs; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "temperature") return SweepParameter::Temperature;
  if (name == "power1") return SweepParameter::CarrierPower;
  if (name == "power2") return SweepParameter::SubcarrierPower;
  if (name == "detuning1") return SweepParameter::CarrierDetuning;
  if (name == "detuning2") return SweepParameter::SubcarrierDetuning;
  if (name == "loss_ppm") return SweepParameter::LossPpm;
  if (name == "cavity_length") return SweepParameter::CavityLength;
  if (name == "input_transmission_ppm")
    return SweepParameter::InputTransmissionPpm;
  if (name == "frequency") return SweepParameter::Frequency;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

std::string sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::Temperature: return "temperature";
    case SweepParameter::CarrierPower: return "power1";
    case SweepParameter::SubcarrierPower: return "power2";
    case SweepParameter::CarrierDetuning: return "detuning1";
    case SweepParameter::SubcarrierDetuning: return "detuning2";
    case SweepParameter::LossPpm: return "loss_ppm";
    case SweepParameter::CavityLength: return "cavity_length";
    case SweepParameter::InputTransmissionPpm: return "input_transmission_ppm";
    case SweepParameter::Frequency: return "frequency";
  }
  return "?";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / (points - 1);
    if (scale == AxisScale::Log)
      out.push_back(start * std::pow(stop / start, t));
    else
      out.push_back(start + (stop - start) * t);
  }
  return out;
}

SweepAxis parse_axis(const std::string& spec) {
  std::vector<std::string> parts;
  std::string part;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(part);
      part.clear();
    } else {
      part += ch;
    }
  }
  parts.push_back(part);
  if (parts.size() != 5)
    throw ConfigError("axis spec must be param:scale:start:stop:points, got '" +
                      spec + "'");

  SweepAxis axis;
  axis.parameter = parse_sweep_parameter(parts[0]);
  if (parts[1] == "linear") axis.scale = AxisScale::Linear;
  else if (parts[1] == "log") axis.scale = AxisScale::Log;
  else throw ConfigError("axis scale must be linear or log, got '" + parts[1] + "'");

  auto number = [&](const std::string& s, const char* what) {
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw ConfigError("bad axis " + std::string(what) + " '" + s + "'");
    return x;
  };
  axis.start = number(parts[2], "start");
  axis.stop = number(parts[3], "stop");
  double pts = number(parts[4], "points");
  axis.points = static_cast<int>(pts);
  if (axis.points < 1 || axis.points != pts)
    throw ConfigError("axis points must be a positive integer");
  if (axis.points >= 2 && !(axis.start < axis.stop))
    throw ConfigError("axis start must be below stop");
  if (axis.scale == AxisScale::Log && !(axis.start > 0.0))
    throw ConfigError("log axis requires start > 0");
  return axis;
}

SweepResult run_sweep(const SimConfig& base, const std::vector<SweepAxis>& axes,
                      double eval_frequency_hz, int workers) {
  if (axes.empty() || axes.size() > 2)
    throw ConfigError("run_sweep takes 1 or 2 axes");
  if (axes.size() == 2 && axes[0].parameter == axes[1].parameter)
    throw ConfigError("sweep axes must reference distinct parameters");
  validate_config(base);

  SweepResult result;
  result.axes = axes;
  result.eval_frequency = eval_frequency_hz;
  std::vector<double> v1 = axes[0].values();
  std::vector<double> v2 =
      axes.size() == 2 ? axes[1].values() : std::vector<double>{0.0};
  result.rows = static_cast<int>(v1.size());
  result.cols = axes.size() == 2 ? static_cast<int>(v2.size()) : 1;
  result.cells.resize(result.rows * result.cols);

  // Stability does not depend on the sideband frequency, so compute it once
  // per distinct configuration rather than per cell.
  auto config_at = [&](int i, int j, double* frequency_hz) {
    SimConfig cfg = base;
    *frequency_hz = eval_frequency_hz;
    if (axes[0].parameter == SweepParameter::Frequency) *frequency_hz = v1[i];
    else apply_override(cfg, axes[0].parameter, v1[i]);
    if (axes.size() == 2) {
      if (axes[1].parameter == SweepParameter::Frequency) *frequency_hz = v2[j];
      else apply_override(cfg, axes[1].parameter, v2[j]);
    }
    return cfg;
  };

  bool freq0 = axes[0].parameter == SweepParameter::Frequency;
  bool freq1 = axes.size() == 2 && axes[1].parameter == SweepParameter::Frequency;
  int stab_rows = freq0 ? 1 : result.rows;
  int stab_cols = freq1 || axes.size() == 1 ? 1 : result.cols;
  std::vector<char> stable_grid(stab_rows * stab_cols, 1);
  parallel_for(stab_rows * stab_cols, workers, [&](int idx) {
    int i = idx / stab_cols, j = idx % stab_cols;
    double f;
    SimConfig cfg = config_at(freq0 ? 0 : i, freq1 ? 0 : j, &f);
    stable_grid[idx] = stability_check(cfg).stable ? 1 : 0;
  });

  parallel_for(result.rows * result.cols, workers, [&](int idx) {
    int i = idx / result.cols, j = idx % result.cols;
    double f;
    SimConfig cfg = config_at(i, j, &f);
    int si = freq0 ? 0 : i;
    int sj = (freq1 || axes.size() == 1) ? 0 : j;
    bool stable = stable_grid[si * stab_cols + sj] != 0;
    result.cells[idx] = evaluate_cell(cfg, f, stable);
  });

  return result;
}

PeakResult find_peak(const SweepResult& result) {
  PeakResult peak;
  peak.all_zero = true;
  double best = -1.0;
  for (int i = 0; i < result.rows; ++i) {
    for (int j = 0; j < result.cols; ++j) {
      double e_n = result.at(i, j).e_n;
      if (e_n > best) {
        best = e_n;
        peak.row = i;
        peak.col = j;
      }
      if (e_n > 0.0) peak.all_zero = false;
    }
  }
  peak.value = best;
  peak.location.push_back(result.axes[0].values()[peak.row]);
  if (result.axes.size() == 2)
    peak.location.push_back(result.axes[1].values()[peak.col]);
  return peak;
}

std::vector<LengthProfileRow> cavity_length_profile(
    const SimConfig& base, const std::vector<double>& lengths,
    const std::vector<double>& temperatures, double frequency_hz) {
  std::vector<LengthProfileRow> table;
  for (double temperature : temperatures) {
    for (double length : lengths) {
      if (!(length > 0.0)) throw ConfigError("cavity length must be > 0");
      SimConfig cfg = base;
      cfg.cavity_length = length;
      cfg.temperature = temperature;
      SweepCell cell = evaluate_cell(cfg, frequency_hz, true);
      table.push_back({length, temperature, cell.e_n});
    }
  }
  return table;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "axis1,axis2,E_N,duan_R,qt_ratio,stable\n";
  std::vector<double> v1 = result.axes[0].values();
  std::vector<double> v2 = result.axes.size() == 2
                               ? result.axes[1].values()
                               : std::vector<double>{};
  for (int i = 0; i < result.rows; ++i) {
    for (int j = 0; j < result.cols; ++j) {
      const SweepCell& cell = result.at(i, j);
      out += fmt17(v1[i]);
      out += ",";
      if (!v2.empty()) out += fmt17(v2[j]);
      out += "," + fmt17(cell.e_n);
      out += "," + (std::isnan(cell.duan_R) ? std::string("nan")
                                            : fmt17(cell.duan_R));
      out += "," + (std::isnan(cell.qt_ratio) ? std::string("nan")
                                              : fmt17(cell.qt_ratio));
      out += cell.stable ? ",1\n" : ",0\n";
    }
  }
  return out;
}

std::string sweep_to_json(const SweepResult& result) {
  nlohmann::json j;
  auto axes = nlohmann::json::array();
  for (const auto& axis : result.axes) {
    axes.push_back({{"parameter", sweep_parameter_name(axis.parameter)},
                    {"scale", axis.scale == AxisScale::Log ? "log" : "linear"},
                    {"start", axis.start},
                    {"stop", axis.stop},
                    {"points", axis.points},
                    {"values", axis.values()}});
  }
  j["axes"] = axes;
  j["eval_frequency_hz"] = result.eval_frequency;
  j["shape"] = {result.rows, result.cols};

  auto cells = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    nlohmann::json c;
    c["E_N"] = cell.e_n;
    if (!std::isnan(cell.duan_R)) c["duan_R"] = cell.duan_R;
    if (!std::isnan(cell.qt_ratio) && std::isfinite(cell.qt_ratio))
      c["qt_ratio"] = cell.qt_ratio;
    c["stable"] = cell.stable;
    c["physical"] = cell.physical;
    if (cell.error) c["error"] = cell.diagnostic;
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j.dump(2);
}

}  // namespace entangler
