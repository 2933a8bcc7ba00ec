#pragma once

#include "entangler/covariance.hpp"

namespace entangler {

enum class MeasureStatus {
  Ok,
  NonPhysicalInput,     // negative radicand: outside the two-mode Gaussian family
  WrongNormalization,   // measure requires VacuumHalf
};

struct MeasureResult {
  double value = 0.0;
  MeasureStatus status = MeasureStatus::Ok;
};

// Logarithmic negativity E_N = max[0, -ln sqrt(2 eta - 2 sqrt(eta^2 - 4 det V))]
// with eta = det V11 + det V22 - 2 det V12. Never throws: nonphysical inputs
// report 0 with a diagnostic status so Monte-Carlo draws can be clamped.
MeasureResult log_negativity(const CovarianceMatrix& V);

// Smaller symplectic eigenvalue of the partial transpose,
// nu = sqrt((eta - sqrt(eta^2 - 4 det V)) / 2); E_N = max(0, -ln 2 nu).
MeasureResult ppt_symplectic_eigenvalue(const CovarianceMatrix& V);

// Same measure in bits instead of nats.
double nats_to_bits(double e_n);

}  // namespace entangler
