#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "entangler/config.hpp"
#include "entangler/covariance.hpp"

namespace entangler {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Linewidths {
  double gamma_in = 0.0;    // rad/s, input coupler
  double gamma_loss = 0.0;  // rad/s, round-trip loss
  double gamma = 0.0;       // rad/s, total half-linewidth
};

Linewidths half_linewidth(const SimConfig& cfg);

// Structurally damped multi-mode susceptibility,
// chi(w) = sum_k [m_k (wk^2 - w^2 - i wk^2/Q_k)]^-1  [m/N].
// The -i loss angle pairs with the (gamma - i w) cavity convention so both
// subsystems decay in the same time direction.
std::complex<double> mech_susceptibility(const ModeTable& modes, double omega);

// Optical spring of one carrier,
// K_j(w) = 2 hbar G^2 Nbar_j delta_j / ((gamma - i w)^2 + delta_j^2)  [N/m],
// with delta_j = -d_j * gamma. The sign of delta is fixed by requiring the
// two-carrier reference configuration to be dynamically stable: the strongly
// detuned subcarrier must stiffen while the near-resonant carrier damps.
std::complex<double> optical_spring(const CarrierConfig& carrier,
                                    const SimConfig& cfg, double omega);

std::complex<double> total_spring(const SimConfig& cfg, double omega);

// chi_eff = (chi^-1 + K_total)^-1: spring-shifted closed-loop response.
std::complex<double> effective_susceptibility(const SimConfig& cfg, double omega);

// One-sided thermal force PSD from the fluctuation-dissipation theorem applied
// to the collective susceptibility: S_F = -(4 k_B T / w) Im[chi(w)^-1]  [N^2/Hz].
// Classical limit only. For a single mode this reduces to
// 4 k_B T m w_k^2 / (Q w).
double thermal_force_psd(const ModeTable& modes, double temperature, double omega);

// Frequency-resolved linear map from the eight vacuum ports
// (carrier-in XY, subcarrier-in XY, carrier-loss XY, subcarrier-loss XY)
// and the thermal force to the four output quadratures.
struct TransferModel {
  double frequency = 0.0;  // rad/s
  Eigen::Matrix<std::complex<double>, 4, 8> M;
  Eigen::Vector4cd v;      // response to unit thermal force
  double S_F = 0.0;        // N^2/Hz at this frequency
};

TransferModel build_transfer(const SimConfig& cfg, double omega);

// V(w) = Re[(1/2) M M^dag + S_F v v^dag], symmetrized, VacuumHalf.
CovarianceMatrix output_covariance(const SimConfig& cfg, double omega);

struct StabilityReport {
  bool stable = false;
  double margin = 0.0;           // min |1 + H| over the scanned locus
  double max_growth_rate = 0.0;  // largest Re(s) over closed-loop poles, 1/s
  bool grid_refined = false;     // locus scan needed the extra refinement pass
};

// Closed-loop verdict from the characteristic polynomial of the rational
// (viscous-matched) model; margin from the open-loop locus H = -chi K.
// See the notes in model.cpp on why root finding replaces encirclement
// counting for high-Q structural damping.
StabilityReport stability_check(const SimConfig& cfg);

// S_QRPN / S_F: quantum radiation pressure force PSD (cavity-filtered vacuum
// amplitude fluctuations) over the thermal force PSD.
double quantum_thermal_ratio(const SimConfig& cfg, double omega);

}  // namespace entangler
