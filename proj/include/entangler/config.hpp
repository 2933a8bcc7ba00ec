#pragma once

#include <stdexcept>
#include <string>

#include "entangler/modes.hpp"

namespace entangler {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CarrierConfig {
  double circulating_power = 0.0;  // W
  double detuning = 0.0;           // units of cavity half-linewidth
};

// Full simulation parameter set. Defaults reproduce the reference operating
// point: two orthogonally polarized carriers on a 1 cm cavity with a
// structurally damped multi-mode micromirror.
struct SimConfig {
  double temperature = 295.0;                  // K
  CarrierConfig carrier{0.2816, 0.3};
  CarrierConfig subcarrier{0.2238, -1.5};
  double round_trip_loss = 250.0;              // ppm
  double cavity_length = 0.01;                 // m
  double input_transmission = 250.0;           // ppm
  double wavelength = 1.064e-6;                // m
  ModeTable modes = default_modes();
};

// Throws ConfigError naming the offending field.
void validate_config(const SimConfig& cfg);

// TOML-subset loader. Sections: [cavity], [carrier], [subcarrier],
// [mechanics], [environment]. Unknown keys are errors. A [mechanics]
// mode_table path is resolved relative to the config file.
SimConfig load_config(const std::string& path);
SimConfig config_from_string(const std::string& text, const std::string& source);

std::string config_to_toml(const SimConfig& cfg);

}  // namespace entangler
