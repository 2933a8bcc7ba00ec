#include "entangler/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace entangler {

namespace {

std::string strip(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct RawValue {
  std::string text;
  bool quoted = false;
};

double as_number(const RawValue& v, const std::string& key) {
  char* end = nullptr;
  double x = std::strtod(v.text.c_str(), &end);
  if (v.quoted || v.text.empty() || end != v.text.c_str() + v.text.size())
    throw ConfigError(key + ": expected a number, got '" + v.text + "'");
  return x;
}

}  // namespace

void validate_config(const SimConfig& cfg) {
  if (!(cfg.temperature >= 0.0))
    throw ConfigError("temperature: must be >= 0");
  if (!(cfg.carrier.circulating_power >= 0.0))
    throw ConfigError("carrier.power_w: must be >= 0");
  if (!(cfg.subcarrier.circulating_power >= 0.0))
    throw ConfigError("subcarrier.power_w: must be >= 0");
  if (!(cfg.cavity_length > 0.0))
    throw ConfigError("cavity.length_m: must be > 0");
  if (!(cfg.input_transmission > 0.0))
    throw ConfigError("cavity.input_transmission_ppm: must be > 0");
  if (!(cfg.round_trip_loss >= 0.0))
    throw ConfigError("cavity.round_trip_loss_ppm: must be >= 0");
  if (!(cfg.wavelength > 0.0))
    throw ConfigError("cavity.wavelength_m: must be > 0");
  if (cfg.modes.modes.empty())
    throw ConfigError("mechanics: mode table is empty");
  try {
    validate_modes(cfg.modes);
  } catch (const ValidationError& err) {
    throw ConfigError(std::string("mechanics: ") + err.what());
  }
}

SimConfig config_from_string(const std::string& text,
                             const std::string& source) {
  SimConfig cfg;
  std::string section;
  std::string mode_table_path;
  double quality_override = 0.0;
  bool has_quality_override = false;

  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    // Strip comments, but not inside quoted strings.
    bool in_quote = false;
    std::string body;
    for (char ch : line) {
      if (ch == '"') in_quote = !in_quote;
      if (ch == '#' && !in_quote) break;
      body += ch;
    }
    body = strip(body);
    if (body.empty()) continue;

    auto where = [&] {
      return source + ":" + std::to_string(line_no);
    };

    if (body.front() == '[') {
      if (body.back() != ']')
        throw ConfigError(where() + ": malformed section header");
      section = strip(body.substr(1, body.size() - 2));
      if (section != "cavity" && section != "carrier" &&
          section != "subcarrier" && section != "mechanics" &&
          section != "environment")
        throw ConfigError(where() + ": unknown section [" + section + "]");
      continue;
    }

    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where() + ": expected key = value");
    std::string key = strip(body.substr(0, eq));
    RawValue value;
    value.text = strip(body.substr(eq + 1));
    if (value.text.size() >= 2 && value.text.front() == '"' &&
        value.text.back() == '"') {
      value.quoted = true;
      value.text = value.text.substr(1, value.text.size() - 2);
    }
    std::string qualified = section.empty() ? key : section + "." + key;

    if (section == "cavity") {
      if (key == "length_m") cfg.cavity_length = as_number(value, qualified);
      else if (key == "input_transmission_ppm")
        cfg.input_transmission = as_number(value, qualified);
      else if (key == "round_trip_loss_ppm")
        cfg.round_trip_loss = as_number(value, qualified);
      else if (key == "wavelength_m")
        cfg.wavelength = as_number(value, qualified);
      else throw ConfigError(where() + ": unknown key " + qualified);
    } else if (section == "carrier" || section == "subcarrier") {
      CarrierConfig& c = section == "carrier" ? cfg.carrier : cfg.subcarrier;
      if (key == "power_w") c.circulating_power = as_number(value, qualified);
      else if (key == "detuning") c.detuning = as_number(value, qualified);
      else throw ConfigError(where() + ": unknown key " + qualified);
    } else if (section == "mechanics") {
      if (key == "mode_table") {
        if (!value.quoted)
          throw ConfigError(where() + ": mode_table must be a quoted path");
        mode_table_path = value.text;
      } else if (key == "quality_factor") {
        quality_override = as_number(value, qualified);
        has_quality_override = true;
      } else
        throw ConfigError(where() + ": unknown key " + qualified);
    } else if (section == "environment") {
      if (key == "temperature_k") cfg.temperature = as_number(value, qualified);
      else throw ConfigError(where() + ": unknown key " + qualified);
    } else {
      throw ConfigError(where() + ": key outside any section: " + key);
    }
  }

  if (!mode_table_path.empty()) {
    std::filesystem::path p(mode_table_path);
    if (p.is_relative()) {
      std::filesystem::path base = std::filesystem::path(source).parent_path();
      if (!base.empty()) p = base / p;
    }
    try {
      cfg.modes = load_modes(p.string());
    } catch (const std::exception& err) {
      throw ConfigError("mechanics.mode_table: " + std::string(err.what()));
    }
  }
  if (has_quality_override) {
    if (!(quality_override > 0.0))
      throw ConfigError("mechanics.quality_factor: must be > 0");
    for (auto& mode : cfg.modes.modes) mode.quality_factor = quality_override;
  }

  validate_config(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_string(buffer.str(), path);
}

std::string config_to_toml(const SimConfig& cfg) {
  std::string out;
  out += "[cavity]\n";
  out += "length_m = " + fmt17(cfg.cavity_length) + "\n";
  out += "input_transmission_ppm = " + fmt17(cfg.input_transmission) + "\n";
  out += "round_trip_loss_ppm = " + fmt17(cfg.round_trip_loss) + "\n";
  out += "wavelength_m = " + fmt17(cfg.wavelength) + "\n\n";
  out += "[carrier]\n";
  out += "power_w = " + fmt17(cfg.carrier.circulating_power) + "\n";
  out += "detuning = " + fmt17(cfg.carrier.detuning) + "\n\n";
  out += "[subcarrier]\n";
  out += "power_w = " + fmt17(cfg.subcarrier.circulating_power) + "\n";
  out += "detuning = " + fmt17(cfg.subcarrier.detuning) + "\n\n";
  out += "[environment]\n";
  out += "temperature_k = " + fmt17(cfg.temperature) + "\n";
  return out;
}

}  // namespace entangler
