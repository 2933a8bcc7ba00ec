#include "entangler/covariance.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace entangler {

namespace {

// 17 significant digits round-trips any double exactly.
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string norm_tag(Normalization n) {
  return n == Normalization::VacuumHalf ? "vacuum_half" : "vacuum_one";
}

Normalization parse_norm(const std::string& tag) {
  if (tag == "vacuum_half" || tag == "VacuumHalf") return Normalization::VacuumHalf;
  if (tag == "vacuum_one" || tag == "VacuumOne") return Normalization::VacuumOne;
  throw std::runtime_error("unknown normalization tag: " + tag);
}

}  // namespace

CovarianceMatrix::CovarianceMatrix()
    : m_(0.5 * Eigen::Matrix4d::Identity()), norm_(Normalization::VacuumHalf) {}

CovarianceMatrix::CovarianceMatrix(const Eigen::Matrix4d& entries,
                                   Normalization norm)
    : m_(0.5 * (entries + entries.transpose())), norm_(norm) {}

CovarianceMatrix CovarianceMatrix::vacuum(Normalization norm) {
  double v = norm == Normalization::VacuumHalf ? 0.5 : 1.0;
  return CovarianceMatrix(v * Eigen::Matrix4d::Identity(), norm);
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

ValidationReport validate_cm(const CovarianceMatrix& V, double tol) {
  Eigen::Matrix4d m = V.entries();
  if (V.normalization() == Normalization::VacuumOne) m *= 0.5;

  ValidationReport report;
  report.symmetry_residual = (m - m.transpose()).cwiseAbs().maxCoeff();

  Eigen::Matrix4cd h = m.cast<std::complex<double>>() +
                       std::complex<double>(0.0, 0.5) *
                           symplectic_form().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.physical =
      report.symmetry_residual <= 1e-12 && report.min_eigenvalue >= -tol;
  return report;
}

CovarianceMatrix rescale(const CovarianceMatrix& V, Normalization target) {
  if (V.normalization() == target) return V;
  double factor = target == Normalization::VacuumOne ? 2.0 : 0.5;
  return CovarianceMatrix(factor * V.entries(), target);
}

std::string cm_to_json(const CovarianceMatrix& V) {
  nlohmann::json j;
  j["normalization"] = norm_tag(V.normalization());
  auto rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(V(i, k));
    rows.push_back(row);
  }
  j["entries"] = rows;
  return j.dump(2);
}

CovarianceMatrix cm_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Normalization norm = Normalization::VacuumHalf;
  if (j.contains("normalization"))
    norm = parse_norm(j.at("normalization").get<std::string>());

  const auto& entries = j.at("entries");
  Eigen::Matrix4d m;
  if (entries.size() == 16) {  // accept a flat row-major array too
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = entries.at(i).get<double>();
  } else if (entries.size() == 4) {
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) m(i, k) = entries.at(i).at(k).get<double>();
  } else {
    throw std::runtime_error("entries must be a 4x4 array or 16 numbers");
  }
  return CovarianceMatrix(m, norm);
}

std::string cm_to_text(const CovarianceMatrix& V) {
  std::string out = "# normalization: " + norm_tag(V.normalization()) + "\n";
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      if (k) out += " ";
      out += fmt17(V(i, k));
    }
    out += "\n";
  }
  return out;
}

CovarianceMatrix cm_from_text(const std::string& text, Normalization fallback) {
  Normalization norm = fallback;
  std::vector<double> numbers;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      auto pos = line.find("normalization:");
      if (pos != std::string::npos) {
        std::istringstream tag(line.substr(pos + 14));
        std::string word;
        if (tag >> word) norm = parse_norm(word);
      }
      continue;
    }
    std::istringstream fields(line);
    double x;
    while (fields >> x) numbers.push_back(x);
    std::string rest;
    if (fields.clear(), fields >> rest)
      throw std::runtime_error("unexpected token in matrix text: " + rest);
  }
  if (numbers.size() != 16)
    throw std::runtime_error("expected 16 matrix entries, found " +
                             std::to_string(numbers.size()));
  Eigen::Matrix4d m;
  for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = numbers[i];
  return CovarianceMatrix(m, norm);
}

CovarianceMatrix load_cm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();

  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return cm_from_json(text);
    break;
  }
  return cm_from_text(text);
}

void save_cm(const CovarianceMatrix& V, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  out << (json ? cm_to_json(V) : cm_to_text(V));
  if (json) out << "\n";
}

}  // namespace entangler
