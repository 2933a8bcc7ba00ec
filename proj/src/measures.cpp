#include "entangler/measures.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace entangler {

namespace {

constexpr double kRadicandTol = -1e-12;

struct PptInvariants {
  double eta = 0.0;
  double radicand = 0.0;  // eta^2 - 4 det V
  double nu_sq = 0.0;     // smaller PPT symplectic eigenvalue, squared
  bool physical = true;
};

PptInvariants ppt_invariants(const CovarianceMatrix& V) {
  PptInvariants inv;
  double det_a = V.block11().determinant();
  double det_c = V.block22().determinant();
  double det_b = V.block12().determinant();
  double det_v = V.entries().determinant();
  inv.eta = det_a + det_c - 2.0 * det_b;
  inv.radicand = inv.eta * inv.eta - 4.0 * det_v;
  if (inv.radicand < kRadicandTol) inv.physical = false;
  // (eta - sqrt(rad))/2 cancels badly for strongly squeezed states; the
  // conjugate form 2 det V / (eta + sqrt(rad)) is exact in the same limit.
  double denom = inv.eta + std::sqrt(std::max(inv.radicand, 0.0));
  inv.nu_sq = denom > 0.0 ? 2.0 * det_v / denom : 0.0;
  return inv;
}

// Smallest symplectic eigenvalue of the partial transpose, from the spectrum
// of Omega * V-tilde. The invariant route (eta - sqrt(eta^2 - 4 det V))/2
// loses accuracy for strongly squeezed states because det V inherits the
// matrix condition number; Omega * V-tilde is similar to a skew-symmetric
// matrix, so its eigenvalues stay accurate to machine epsilon times ||V||.
double ppt_nu_min(const CovarianceMatrix& V) {
  Eigen::Matrix4d vt = V.entries();
  vt.row(3) *= -1.0;  // partial transpose: flip the second momentum
  vt.col(3) *= -1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(symplectic_form() * vt, false);
  double nu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    nu = std::min(nu, std::abs(solver.eigenvalues()(i)));
  return nu;
}

}  // namespace

MeasureResult log_negativity(const CovarianceMatrix& V) {
  if (V.normalization() != Normalization::VacuumHalf)
    return {0.0, MeasureStatus::WrongNormalization};

  PptInvariants inv = ppt_invariants(V);
  if (!inv.physical) return {0.0, MeasureStatus::NonPhysicalInput};

  if (inv.nu_sq <= 0.0) return {0.0, MeasureStatus::NonPhysicalInput};
  return {std::max(0.0, -std::log(2.0 * ppt_nu_min(V))), MeasureStatus::Ok};
}

MeasureResult ppt_symplectic_eigenvalue(const CovarianceMatrix& V) {
  if (V.normalization() != Normalization::VacuumHalf)
    return {0.0, MeasureStatus::WrongNormalization};

  PptInvariants inv = ppt_invariants(V);
  if (!inv.physical) return {0.0, MeasureStatus::NonPhysicalInput};

  if (inv.nu_sq <= 0.0) return {0.0, MeasureStatus::NonPhysicalInput};
  return {ppt_nu_min(V), MeasureStatus::Ok};
}

double nats_to_bits(double e_n) { return e_n / std::log(2.0); }

}  // namespace entangler
