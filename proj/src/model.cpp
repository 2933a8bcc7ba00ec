#include "entangler/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "entangler/constants.hpp"

namespace entangler {

namespace {

namespace k = constants;
using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};

struct CarrierParams {
  double a_bar = 0.0;  // sqrt of intracavity photon number
  double delta = 0.0;  // detuning in rad/s
};

struct ModelParams {
  Linewidths lw;
  double G = 0.0;  // optical frequency shift per meter, rad/(s m)
  CarrierParams carriers[2];
};

ModelParams model_params(const SimConfig& cfg) {
  ModelParams p;
  p.lw = half_linewidth(cfg);
  double omega0 = 2.0 * k::pi * k::c / cfg.wavelength;
  p.G = omega0 / cfg.cavity_length;
  const CarrierConfig* carriers[2] = {&cfg.carrier, &cfg.subcarrier};
  for (int j = 0; j < 2; ++j) {
    double n_bar = 2.0 * carriers[j]->circulating_power * cfg.cavity_length /
                   (k::hbar * omega0 * k::c);
    p.carriers[j].a_bar = std::sqrt(n_bar);
    // Detuning sign: the positive-d carrier provides damping and the
    // negative-d subcarrier the restoring spring, which is the stable
    // double-spring assignment for the reference power split.
    p.carriers[j].delta = -carriers[j]->detuning * p.lw.gamma;
  }
  return p;
}

// D = [(gamma - i w) I - delta J]^-1, J = [[0, -1], [1, 0]].
Eigen::Matrix2cd resolvent(double gamma, double delta, double omega) {
  cplx d = (gamma - kI * omega) * (gamma - kI * omega) + delta * delta;
  Eigen::Matrix2cd out;
  out << gamma - kI * omega, -delta, delta, gamma - kI * omega;
  return out / d;
}

// --- small dense polynomials (ascending coefficients) for the stability
// characteristic equation ---

std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void poly_add(std::vector<double>& a, const std::vector<double>& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

// Roots via the companion matrix of the monic polynomial.
std::vector<cplx> poly_roots(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i] / coeffs[n];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
  std::vector<cplx> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

}  // namespace

Linewidths half_linewidth(const SimConfig& cfg) {
  Linewidths lw;
  lw.gamma_in = k::c * cfg.input_transmission * 1e-6 / (4.0 * cfg.cavity_length);
  lw.gamma_loss = k::c * cfg.round_trip_loss * 1e-6 / (4.0 * cfg.cavity_length);
  lw.gamma = lw.gamma_in + lw.gamma_loss;
  return lw;
}

std::complex<double> mech_susceptibility(const ModeTable& modes, double omega) {
  cplx chi = 0.0;
  for (const auto& mode : modes.modes) {
    double wk = 2.0 * k::pi * mode.resonance_frequency;
    chi += 1.0 / (mode.effective_mass *
                  (wk * wk - omega * omega - kI * wk * wk / mode.quality_factor));
  }
  return chi;
}

std::complex<double> optical_spring(const CarrierConfig& carrier,
                                    const SimConfig& cfg, double omega) {
  Linewidths lw = half_linewidth(cfg);
  double omega0 = 2.0 * k::pi * k::c / cfg.wavelength;
  double G = omega0 / cfg.cavity_length;
  double n_bar = 2.0 * carrier.circulating_power * cfg.cavity_length /
                 (k::hbar * omega0 * k::c);
  double delta = -carrier.detuning * lw.gamma;
  cplx denom = (lw.gamma - kI * omega) * (lw.gamma - kI * omega) +
               delta * delta;
  return 2.0 * k::hbar * G * G * n_bar * delta / denom;
}

std::complex<double> total_spring(const SimConfig& cfg, double omega) {
  return optical_spring(cfg.carrier, cfg, omega) +
         optical_spring(cfg.subcarrier, cfg, omega);
}

std::complex<double> effective_susceptibility(const SimConfig& cfg,
                                              double omega) {
  cplx chi = mech_susceptibility(cfg.modes, omega);
  cplx denom = 1.0 / chi + total_spring(cfg, omega);
  if (std::abs(denom) < 1e-30)
    throw ModelError("SingularSusceptibility: chi^-1 + K vanishes at omega = " +
                     std::to_string(omega) + " rad/s");
  return 1.0 / denom;
}

double thermal_force_psd(const ModeTable& modes, double temperature,
                         double omega) {
  if (temperature <= 0.0) return 0.0;
  cplx chi = mech_susceptibility(modes, omega);
  double s = -(4.0 * k::k_B * temperature / omega) * std::imag(1.0 / chi);
  return std::max(s, 0.0);
}

TransferModel build_transfer(const SimConfig& cfg, double omega) {
  ModelParams p = model_params(cfg);
  const double gin = p.lw.gamma_in;
  const double gl = p.lw.gamma_loss;

  cplx chi = mech_susceptibility(cfg.modes, omega);
  cplx spring = total_spring(cfg, omega);
  cplx denom = 1.0 / chi + spring;
  if (std::abs(denom) < 1e-30)
    throw ModelError("SingularSystem: closed loop is rank-deficient at omega = " +
                     std::to_string(omega) + " rad/s");
  cplx chi_eff = 1.0 / denom;

  // Per carrier: cavity resolvent, phase-quadrature response to mirror motion
  // (column), and radiation-pressure force from the amplitude quadrature (row).
  Eigen::Matrix2cd D[2];
  Eigen::Vector2cd w[2];
  Eigen::RowVector2cd f[2];
  for (int j = 0; j < 2; ++j) {
    D[j] = resolvent(p.lw.gamma, p.carriers[j].delta, omega);
    double g_j = std::sqrt(2.0) * p.G * p.carriers[j].a_bar;
    w[j] = g_j * D[j].col(1);
    f[j] = std::sqrt(2.0) * k::hbar * p.G * p.carriers[j].a_bar * D[j].row(0);
  }

  // Mirror displacement per unit port input (loop already closed via chi_eff).
  Eigen::Matrix<cplx, 1, 8> x_row = Eigen::Matrix<cplx, 1, 8>::Zero();
  for (int j = 0; j < 2; ++j) {
    x_row.segment<2>(2 * j) += chi_eff * std::sqrt(2.0 * gin) * f[j];
    x_row.segment<2>(4 + 2 * j) += chi_eff * std::sqrt(2.0 * gl) * f[j];
  }

  TransferModel tm;
  tm.frequency = omega;
  tm.M.setZero();
  for (int j = 0; j < 2; ++j) {
    // a_out = -a_in + sqrt(2 gin) a_cav
    tm.M.block<2, 2>(2 * j, 2 * j) +=
        -Eigen::Matrix2cd::Identity() + 2.0 * gin * D[j];
    tm.M.block<2, 2>(2 * j, 4 + 2 * j) += 2.0 * std::sqrt(gin * gl) * D[j];
    tm.M.block<2, 8>(2 * j, 0) += std::sqrt(2.0 * gin) * w[j] * x_row;
    tm.v.segment<2>(2 * j) = std::sqrt(2.0 * gin) * chi_eff * w[j];
  }
  tm.S_F = thermal_force_psd(cfg.modes, cfg.temperature, omega);
  return tm;
}

CovarianceMatrix output_covariance(const SimConfig& cfg, double omega) {
  TransferModel tm = build_transfer(cfg, omega);
  Eigen::Matrix4cd v_c = 0.5 * tm.M * tm.M.adjoint() +
                         tm.S_F * tm.v * tm.v.adjoint();
  Eigen::Matrix4d v = v_c.real();
  return CovarianceMatrix(0.5 * (v + v.transpose()), Normalization::VacuumHalf);
}

double quantum_thermal_ratio(const SimConfig& cfg, double omega) {
  ModelParams p = model_params(cfg);
  double s_qrpn = 0.0;
  for (int j = 0; j < 2; ++j) {
    Eigen::Matrix2cd D = resolvent(p.lw.gamma, p.carriers[j].delta, omega);
    double f_j = std::sqrt(2.0) * k::hbar * p.G * p.carriers[j].a_bar;
    s_qrpn += 2.0 * f_j * f_j * p.lw.gamma *
              (std::norm(D(0, 0)) + std::norm(D(0, 1)));
  }
  double s_f = thermal_force_psd(cfg.modes, cfg.temperature, omega);
  if (s_f <= 0.0)
    return s_qrpn > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return s_qrpn / s_f;
}

// Stability. The verdict comes from the closed-loop characteristic polynomial
// D_chi D_K + N_chi N_K = 0 in s (viscous-matched damping Gamma_k = w_k/Q_k,
// which agrees with the structural model at each resonance): counting Nyquist
// encirclements of the structural-damping locus is unreliable here because its
// analytic continuation is non-causal (spurious upper-half-plane poles) and
// the Q ~ 1e4 resonance loops are fractions of a hertz wide. The margin is
// still the locus distance min |1 + H|, H = -chi K, on a refined scan.
StabilityReport stability_check(const SimConfig& cfg) {
  ModelParams p = model_params(cfg);
  const double gamma = p.lw.gamma;
  StabilityReport report;

  // Characteristic polynomial in z = s / gamma for conditioning.
  std::vector<std::vector<double>> q;  // mechanical denominators
  for (const auto& mode : cfg.modes.modes) {
    double wk = 2.0 * k::pi * mode.resonance_frequency;
    double damping = wk / mode.quality_factor;
    q.push_back({mode.effective_mass * wk * wk,
                 mode.effective_mass * damping * gamma,
                 mode.effective_mass * gamma * gamma});
  }
  std::vector<std::vector<double>> delta_poly;  // cavity denominators
  std::vector<double> kappa;
  for (int j = 0; j < 2; ++j) {
    double d = p.carriers[j].delta;
    delta_poly.push_back({gamma * gamma + d * d, 2.0 * gamma * gamma,
                          gamma * gamma});
    kappa.push_back(2.0 * k::hbar * p.G * p.G * p.carriers[j].a_bar *
                    p.carriers[j].a_bar * d);
  }

  std::vector<double> d_chi{1.0};
  for (const auto& qk : q) d_chi = poly_mul(d_chi, qk);
  std::vector<double> n_chi{0.0};
  for (size_t i = 0; i < q.size(); ++i) {
    std::vector<double> term{1.0};
    for (size_t j = 0; j < q.size(); ++j)
      if (j != i) term = poly_mul(term, q[j]);
    poly_add(n_chi, term);
  }
  std::vector<double> d_k = poly_mul(delta_poly[0], delta_poly[1]);
  std::vector<double> n_k{0.0};
  for (int j = 0; j < 2; ++j) {
    std::vector<double> term{kappa[j]};
    term = poly_mul(term, delta_poly[1 - j]);
    poly_add(n_k, term);
  }

  std::vector<double> char_poly = poly_mul(d_chi, d_k);
  poly_add(char_poly, poly_mul(n_chi, n_k));

  double max_re = -std::numeric_limits<double>::infinity();
  for (const cplx& z : poly_roots(char_poly))
    max_re = std::max(max_re, z.real() * gamma);
  report.max_growth_rate = max_re;
  report.stable = max_re < 1e-9 * gamma;

  // Locus scan for the margin.
  std::vector<double> freqs;
  const int n_log = 4096;
  for (int i = 0; i < n_log; ++i)
    freqs.push_back(std::pow(10.0, 0.0 + 7.0 * i / (n_log - 1)));
  for (const auto& mode : cfg.modes.modes) {
    double f0 = mode.resonance_frequency;
    double half_width = 5.0 * f0 / mode.quality_factor;
    for (int i = 0; i < 256; ++i)
      freqs.push_back(f0 - half_width +
                      2.0 * half_width * i / 255.0);
  }
  std::sort(freqs.begin(), freqs.end());

  auto eval = [&](double f_hz) {
    double omega = 2.0 * k::pi * f_hz;
    return 1.0 + (-mech_susceptibility(cfg.modes, omega) *
                  total_spring(cfg, omega));
  };

  std::vector<cplx> z(freqs.size());
  for (size_t i = 0; i < freqs.size(); ++i) z[i] = eval(freqs[i]);

  auto coarse_segments = [&] {
    std::vector<size_t> out;
    for (size_t i = 1; i < z.size(); ++i) {
      double dphase = std::abs(std::arg(z[i] / z[i - 1]));
      if (dphase > k::pi / 2.0) out.push_back(i);
    }
    return out;
  };

  std::vector<size_t> coarse = coarse_segments();
  if (!coarse.empty()) {
    // One refinement pass: bisect the offending segments.
    std::vector<double> extra;
    for (size_t i : coarse)
      extra.push_back(std::sqrt(freqs[i - 1] * freqs[i]));
    for (double f_hz : extra) {
      auto pos = std::lower_bound(freqs.begin(), freqs.end(), f_hz);
      size_t idx = pos - freqs.begin();
      freqs.insert(pos, f_hz);
      z.insert(z.begin() + idx, eval(f_hz));
    }
    report.grid_refined = true;
  }

  double margin = std::numeric_limits<double>::infinity();
  for (const cplx& value : z) margin = std::min(margin, std::abs(value));
  report.margin = margin;
  return report;
}

}  // namespace entangler
