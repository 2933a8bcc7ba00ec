#include "entangler/modes.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace entangler {

namespace {

const char* kHeader = "label,frequency_hz,quality_factor,effective_mass_kg";

std::string strip(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, const std::string& name,
                    int line) {
  const std::string value = strip(field);
  char* end = nullptr;
  double x = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ParseError("bad " + name + " value '" + value + "'", line);
  return x;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void validate_modes(const ModeTable& table) {
  if (table.modes.empty())
    throw ValidationError("mode table is empty: " + table.source);
  for (const auto& mode : table.modes) {
    if (!(mode.resonance_frequency > 0.0))
      throw ValidationError("mode '" + mode.label +
                            "': resonance_frequency must be > 0");
    if (!(mode.quality_factor > 0.0))
      throw ValidationError("mode '" + mode.label +
                            "': quality_factor must be > 0");
    if (!(mode.effective_mass > 0.0))
      throw ValidationError("mode '" + mode.label +
                            "': effective_mass must be > 0");
  }
  for (size_t i = 1; i < table.modes.size(); ++i) {
    if (!(table.modes[i - 1].resonance_frequency <
          table.modes[i].resonance_frequency))
      throw ValidationError("duplicate mode frequency " +
                            fmt17(table.modes[i].resonance_frequency) + " Hz");
  }
  for (size_t i = 0; i < table.modes.size(); ++i)
    for (size_t k = i + 1; k < table.modes.size(); ++k)
      if (table.modes[i].label == table.modes[k].label)
        throw ValidationError("duplicate mode label '" + table.modes[i].label +
                              "'");
}

ModeTable modes_from_csv(const std::string& text, const std::string& source) {
  ModeTable table;
  table.source = source;

  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(lines, line)) {
    ++line_no;
    std::string body = strip(line);
    if (body.empty() || body[0] == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char ch : body)
        if (ch != ' ' && ch != '\t') compact += ch;
      if (compact != kHeader)
        throw ParseError("expected header '" + std::string(kHeader) + "'",
                         line_no);
      header_seen = true;
      continue;
    }

    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(body);
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw ParseError("expected 4 fields, found " +
                           std::to_string(fields.size()),
                       line_no);

    MechanicalMode mode;
    mode.label = strip(fields[0]);
    if (mode.label.empty()) throw ParseError("empty label", line_no);
    mode.resonance_frequency = parse_number(fields[1], "frequency_hz", line_no);
    mode.quality_factor = parse_number(fields[2], "quality_factor", line_no);
    mode.effective_mass =
        parse_number(fields[3], "effective_mass_kg", line_no);
    table.modes.push_back(mode);
  }
  if (!header_seen) throw ParseError("missing header", line_no);

  std::stable_sort(table.modes.begin(), table.modes.end(),
                   [](const MechanicalMode& a, const MechanicalMode& b) {
                     return a.resonance_frequency < b.resonance_frequency;
                   });
  validate_modes(table);
  return table;
}

ModeTable load_modes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open mode table: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return modes_from_csv(buffer.str(), path);
}

std::string modes_to_csv(const ModeTable& table) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& mode : table.modes) {
    out += mode.label + "," + fmt17(mode.resonance_frequency) + "," +
           fmt17(mode.quality_factor) + "," + fmt17(mode.effective_mass) +
           "\n";
  }
  return out;
}

void save_modes(const ModeTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write mode table: " + path);
  out << modes_to_csv(table);
}

ModeTable default_modes() {
  ModeTable table;
  table.source = "builtin";
  table.modes = {
      {"fundamental", 876.0, 17000.0, 3.0e-11},
      {"yaw", 4300.0, 17000.0, 6.8e-7},
      {"translation_yaw", 54000.0, 17000.0, 4.3e-9},
  };
  return table;
}

}  // namespace entangler
