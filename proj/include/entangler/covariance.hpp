#pragma once

#include <Eigen/Dense>
#include <string>

namespace entangler {

// Vacuum-variance convention for quadrature covariance matrices.
// VacuumHalf: vacuum = (1/2) I (used by the negativity measures).
// VacuumOne:  vacuum = I (used by the Duan reduction).
enum class Normalization { VacuumHalf, VacuumOne };

// Real symmetric 4x4 quadrature covariance matrix, basis order X1, Y1, X2, Y2.
// Construction symmetrizes; entries are immutable afterwards.
class CovarianceMatrix {
 public:
  CovarianceMatrix();  // vacuum, VacuumHalf
  CovarianceMatrix(const Eigen::Matrix4d& entries, Normalization norm);

  static CovarianceMatrix vacuum(Normalization norm = Normalization::VacuumHalf);

  const Eigen::Matrix4d& entries() const { return m_; }
  Normalization normalization() const { return norm_; }

  Eigen::Matrix2d block11() const { return m_.block<2, 2>(0, 0); }
  Eigen::Matrix2d block12() const { return m_.block<2, 2>(0, 2); }
  Eigen::Matrix2d block22() const { return m_.block<2, 2>(2, 2); }

  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Eigen::Matrix4d m_;
  Normalization norm_;
};

// Symplectic form in the X1, Y1, X2, Y2 ordering.
Eigen::Matrix4d symplectic_form();

struct ValidationReport {
  double symmetry_residual = 0.0;
  double min_eigenvalue = 0.0;  // of V + (i/2) Omega, Hermitian
  bool physical = false;
};

// Uncertainty-principle check: V + (i/2) Omega >= -tol. Interprets the matrix
// in VacuumHalf units (rescales a VacuumOne input first).
ValidationReport validate_cm(const CovarianceMatrix& V, double tol = 1e-9);

CovarianceMatrix rescale(const CovarianceMatrix& V, Normalization target);

std::string cm_to_json(const CovarianceMatrix& V);
CovarianceMatrix cm_from_json(const std::string& text);

// 4-line whitespace-separated text form; '#' lines are comments. An optional
// "# normalization: vacuum_one" comment overrides the default tag.
std::string cm_to_text(const CovarianceMatrix& V);
CovarianceMatrix cm_from_text(const std::string& text,
                              Normalization fallback = Normalization::VacuumHalf);

// Sniffs JSON vs text by the first non-space character.
CovarianceMatrix load_cm(const std::string& path);
void save_cm(const CovarianceMatrix& V, const std::string& path);

}  // namespace entangler
