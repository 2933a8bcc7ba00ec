#pragma once

#include <cmath>
#include <random>

#include "entangler/covariance.hpp"

namespace entangler::test {

// The published room-temperature output matrix (VacuumHalf units).
inline CovarianceMatrix reference_matrix() {
  Eigen::Matrix4d m;
  m << 17.32, -51.38, -21.06, -14.80,
      -51.38, 156.2, 63.76, 45.07,
      -21.06, 63.76, 26.61, 18.47,
      -14.80, 45.07, 18.47, 13.54;
  return CovarianceMatrix(m, Normalization::VacuumHalf);
}

// Two-mode squeezed vacuum, VacuumHalf: A = B = cosh(2r)/2 I,
// C = sinh(2r)/2 diag(1, -1).
inline CovarianceMatrix tmsv(double r) {
  double ch = std::cosh(2.0 * r) / 2.0;
  double sh = std::sinh(2.0 * r) / 2.0;
  Eigen::Matrix4d m;
  m << ch, 0, sh, 0,
      0, ch, 0, -sh,
      sh, 0, ch, 0,
      0, -sh, 0, ch;
  return CovarianceMatrix(m, Normalization::VacuumHalf);
}

// Random single-mode symplectic: rotation * squeeze * rotation.
inline Eigen::Matrix2d random_symplectic_1m(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979324);
  std::uniform_real_distribution<double> squeeze(-0.8, 0.8);
  auto rotation = [](double theta) {
    Eigen::Matrix2d out;
    out << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return out;
  };
  double z = squeeze(rng);
  Eigen::Matrix2d s = Eigen::Vector2d(std::exp(z), std::exp(-z)).asDiagonal();
  return rotation(angle(rng)) * s * rotation(angle(rng));
}

// Random physical two-mode state: local symplectics applied to a random
// standard form n1 = n2, m1 = m2 with correlations inside the physical range.
inline CovarianceMatrix random_physical_cm(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> nm(1.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    double n = nm(rng), m = nm(rng);
    // Spans both separable and entangled states; the TMSV-like ceiling
    // sqrt((n^2-1)(m^2-1))^(1/2) can overshoot, so draws are rejection
    // filtered on the uncertainty relation below.
    double cmax = std::sqrt(std::sqrt((n * n - 1.0) * (m * m - 1.0)));
    double c = cmax * unit(rng);
    double cp = -c * unit(rng);

    Eigen::Matrix4d v0 = Eigen::Matrix4d::Zero();
    v0(0, 0) = v0(1, 1) = n;
    v0(2, 2) = v0(3, 3) = m;
    v0(0, 2) = v0(2, 0) = c;
    v0(1, 3) = v0(3, 1) = cp;

    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s.block<2, 2>(0, 0) = random_symplectic_1m(rng);
    s.block<2, 2>(2, 2) = random_symplectic_1m(rng);
    // v0 is in VacuumOne units; rescale to half for the measures.
    CovarianceMatrix v(0.5 * s * v0 * s.transpose(),
                       Normalization::VacuumHalf);
    if (validate_cm(v, 1e-12).physical) return v;
  }
}

}  // namespace entangler::test
