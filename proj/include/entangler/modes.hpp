#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entangler {

// One mechanical resonance of the cavity end mirror.
struct MechanicalMode {
  std::string label;
  double resonance_frequency = 0.0;  // Hz
  double quality_factor = 0.0;
  double effective_mass = 0.0;       // kg
};

struct ModeTable {
  std::vector<MechanicalMode> modes;  // sorted by frequency, strictly increasing
  std::string source;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  int line;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CSV schema: label,frequency_hz,quality_factor,effective_mass_kg.
// '#' lines and blank lines are skipped; rows are sorted on load.
ModeTable load_modes(const std::string& path);
ModeTable modes_from_csv(const std::string& text, const std::string& source);
void save_modes(const ModeTable& table, const std::string& path);
std::string modes_to_csv(const ModeTable& table);

// Built-in mirror: suspension fundamental plus the yaw and translation-yaw
// resonances. Masses are calibration inputs, not measured values; the higher
// modes are deliberately heavy/light so their thermal contribution matches the
// intended noise budget (see README).
ModeTable default_modes();

void validate_modes(const ModeTable& table);

}  // namespace entangler
