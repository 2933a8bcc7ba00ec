#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "entangler/config.hpp"
#include "entangler/model.hpp"

namespace entangler {

enum class SweepParameter {
  Temperature,
  CarrierPower,
  SubcarrierPower,
  CarrierDetuning,
  SubcarrierDetuning,
  LossPpm,
  CavityLength,
  InputTransmissionPpm,
  Frequency,
};

enum class AxisScale { Linear, Log };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string sweep_parameter_name(SweepParameter p);

struct SweepAxis {
  SweepParameter parameter = SweepParameter::Frequency;
  AxisScale scale = AxisScale::Log;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  std::vector<double> values() const;
};

// Axis spec "param:scale:start:stop:points", e.g. "temperature:log:1:295:64".
SweepAxis parse_axis(const std::string& spec);

struct SweepCell {
  double e_n = 0.0;
  double duan_R = std::nan("");
  double qt_ratio = std::nan("");
  bool stable = true;
  bool physical = true;
  bool error = false;
  std::string diagnostic;
};

struct SweepResult {
  std::vector<SweepAxis> axes;        // 1 or 2
  double eval_frequency = 0.0;        // Hz, used when no frequency axis
  int rows = 0, cols = 0;             // cols == 1 for 1-D sweeps
  std::vector<SweepCell> cells;       // row-major

  const SweepCell& at(int i, int j) const { return cells[i * cols + j]; }
};

// Evaluates every grid point of the Cartesian product. Unstable or failing
// cells are flagged, never skipped. Deterministic and independent of worker
// count (cells are pure functions of the config). workers <= 0 means
// hardware concurrency.
SweepResult run_sweep(const SimConfig& base, const std::vector<SweepAxis>& axes,
                      double eval_frequency_hz = 20000.0, int workers = 0);

struct PeakResult {
  int row = 0, col = 0;
  std::vector<double> location;  // axis values at the argmax
  double value = 0.0;
  bool all_zero = false;
};

// Grid argmax of E_N; ties break toward the lower parameter value.
PeakResult find_peak(const SweepResult& result);

struct LengthProfileRow {
  double cavity_length = 0.0;  // m
  double temperature = 0.0;    // K
  double e_n = 0.0;
};

std::vector<LengthProfileRow> cavity_length_profile(
    const SimConfig& base, const std::vector<double>& lengths,
    const std::vector<double>& temperatures, double frequency_hz = 20000.0);

// Long-format CSV: axis1,axis2,E_N,duan_R,qt_ratio,stable. 1-D sweeps leave
// the axis2 column empty.
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

}  // namespace entangler
