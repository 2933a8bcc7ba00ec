#include <doctest.h>

#include <cmath>
#include <complex>

#include "entangler/constants.hpp"
#include "entangler/measures.hpp"
#include "entangler/model.hpp"
#include "test_support.hpp"

using namespace entangler;
namespace k = entangler::constants;

namespace {

constexpr double kTwoPi = 2.0 * k::pi;

SimConfig reference_config() { return SimConfig{}; }

SimConfig single_mode_config(double f0, double q, double mass) {
  SimConfig cfg;
  cfg.modes.modes = {{"only", f0, q, mass}};
  return cfg;
}

// Symplectic eigenvalues: |eigenvalues of Omega V| come in two equal pairs.
std::pair<double, double> symplectic_eigenvalues(const CovarianceMatrix& v) {
  Eigen::Matrix4d a = symplectic_form() * v.entries();
  Eigen::EigenSolver<Eigen::Matrix4d> solver(a);
  std::vector<double> mags;
  for (int i = 0; i < 4; ++i) mags.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(mags.begin(), mags.end());
  return {mags[0], mags[3]};
}

}  // namespace

TEST_CASE("half_linewidth arithmetic") {
  SimConfig cfg;
  cfg.input_transmission = 500.0;
  cfg.round_trip_loss = 250.0;
  cfg.cavity_length = 0.01;
  Linewidths lw = half_linewidth(cfg);
  CHECK(lw.gamma == doctest::Approx(5.625e6).epsilon(1e-3));
  CHECK(lw.gamma_in == doctest::Approx(3.74740e6).epsilon(1e-3));
  CHECK(lw.gamma == doctest::Approx(lw.gamma_in + lw.gamma_loss));

  cfg.cavity_length = 0.02;
  CHECK(half_linewidth(cfg).gamma == doctest::Approx(lw.gamma / 2.0));
}

TEST_CASE("mech_susceptibility: static, resonant, additive") {
  double f0 = 1000.0, q = 1e4, mass = 1e-9;
  double w0 = kTwoPi * f0;
  ModeTable one;
  one.modes = {{"a", f0, q, mass}};

  auto chi_static = mech_susceptibility(one, w0 * 1e-4);
  CHECK(std::abs(chi_static) ==
        doctest::Approx(1.0 / (mass * w0 * w0)).epsilon(1e-3));
  // Structural damping enters the denominator as -i wk^2/Q, so Im(chi) > 0
  // at every frequency; this is what makes -Im(1/chi) a positive loss angle.
  CHECK(chi_static.imag() > 0.0);

  auto chi_res = mech_susceptibility(one, w0);
  CHECK(std::abs(chi_res) == doctest::Approx(q / (mass * w0 * w0)).epsilon(1e-9));

  ModeTable two = one;
  two.modes.push_back({"b", 5 * f0, q, mass});
  ModeTable other;
  other.modes = {two.modes[1]};
  double omega = kTwoPi * 2500.0;
  auto sum = mech_susceptibility(one, omega) + mech_susceptibility(other, omega);
  CHECK(std::abs(mech_susceptibility(two, omega) - sum) <= 1e-9 * std::abs(sum));
}

TEST_CASE("optical_spring zeros and sign") {
  SimConfig cfg = reference_config();
  CarrierConfig off{0.0, 0.5};
  CHECK(std::abs(optical_spring(off, cfg, kTwoPi * 1e3)) == 0.0);
  CarrierConfig resonant{0.25, 0.0};
  CHECK(std::abs(optical_spring(resonant, cfg, kTwoPi * 1e3)) == 0.0);

  // DC spring sign is opposite to the detuning parameter: the negative-d
  // subcarrier supplies the restoring force (stable double-spring assignment).
  CarrierConfig pos{0.25, 0.5}, neg{0.25, -0.5};
  CHECK(optical_spring(pos, cfg, 1.0).real() < 0.0);
  CHECK(optical_spring(neg, cfg, 1.0).real() > 0.0);

  // Reference operating point: net positive static spring around 16.25 N/m.
  double k_total = total_spring(cfg, 1.0).real();
  CHECK(k_total > 15.0);
  CHECK(k_total < 17.5);
}

TEST_CASE("effective_susceptibility reduces to chi without light") {
  SimConfig cfg = reference_config();
  cfg.carrier.circulating_power = 0.0;
  cfg.subcarrier.circulating_power = 0.0;
  double omega = kTwoPi * 3e3;
  auto chi = mech_susceptibility(cfg.modes, omega);
  CHECK(std::abs(effective_susceptibility(cfg, omega) - chi) <=
        1e-12 * std::abs(chi));
}

TEST_CASE("effective_susceptibility: spring shifts the fundamental") {
  SimConfig cfg = reference_config();
  auto argmax_f = [&](bool with_spring) {
    double best_f = 0.0, best = -1.0;
    for (int i = 0; i < 600; ++i) {
      double f = 100.0 * std::pow(1e3, i / 599.0);  // 0.1 to 100 kHz
      double omega = kTwoPi * f;
      double mag = with_spring ? std::abs(effective_susceptibility(cfg, omega))
                               : std::abs(mech_susceptibility(cfg.modes, omega));
      if (mag > best) {
        best = mag;
        best_f = f;
      }
    }
    return best_f;
  };
  double bare = argmax_f(false);
  double sprung = argmax_f(true);
  CHECK(bare == doctest::Approx(876.0).epsilon(0.02));
  CHECK(sprung > 10.0 * bare);  // pushed far above the bare fundamental
}

TEST_CASE("thermal_force_psd basics") {
  ModeTable one;
  one.modes = {{"a", 1000.0, 1e4, 1e-9}};
  double omega = kTwoPi * 250.0;
  CHECK(thermal_force_psd(one, 0.0, omega) == 0.0);
  double s1 = thermal_force_psd(one, 100.0, omega);
  CHECK(thermal_force_psd(one, 200.0, omega) == doctest::Approx(2.0 * s1));
  // structural single mode: exact 1/Omega scaling and closed form
  CHECK(thermal_force_psd(one, 100.0, 2.0 * omega) ==
        doctest::Approx(0.5 * s1).epsilon(1e-12));
  double w0 = kTwoPi * 1000.0;
  double expected = 4.0 * k::k_B * 100.0 * 1e-9 * w0 * w0 / (1e4 * omega);
  CHECK(s1 == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("build_transfer: decoupled carriers have no cross blocks") {
  SimConfig cfg = reference_config();
  cfg.carrier.circulating_power = 0.0;
  cfg.subcarrier.circulating_power = 0.0;
  TransferModel tm = build_transfer(cfg, kTwoPi * 2e4);
  CHECK(tm.M.block<2, 2>(0, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tm.M.block<2, 2>(2, 0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(tm.M.block<2, 2>(0, 6).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_transfer: lossless zero-coupling reflection is unitary") {
  SimConfig cfg = reference_config();
  cfg.round_trip_loss = 1e-12;  // loss channel off
  cfg.carrier.circulating_power = 0.0;
  cfg.subcarrier.circulating_power = 0.0;
  TransferModel tm = build_transfer(cfg, kTwoPi * 2e4);
  Eigen::Matrix4cd gram = tm.M * tm.M.adjoint();
  CHECK((gram - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("build_transfer: commutators preserved at full coupling") {
  // M Omega_8 M^dag = Omega_4 for the lossless cavity; the active
  // (ponderomotive) part squeezes but cannot break the commutation relations.
  SimConfig cfg = reference_config();
  cfg.round_trip_loss = 1e-12;
  for (auto& mode : cfg.modes.modes) mode.quality_factor = 1e15;
  cfg.temperature = 0.0;

  Eigen::Matrix<std::complex<double>, 8, 8> omega8;
  omega8.setZero();
  for (int b = 0; b < 4; ++b) {
    omega8(2 * b, 2 * b + 1) = 1.0;
    omega8(2 * b + 1, 2 * b) = -1.0;
  }
  Eigen::Matrix4cd omega4 = symplectic_form().cast<std::complex<double>>();

  for (double f : {2e3, 2e4, 8e4}) {
    TransferModel tm = build_transfer(cfg, kTwoPi * f);
    Eigen::Matrix4cd lhs = tm.M * omega8 * tm.M.adjoint();
    CHECK((lhs - omega4).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("build_transfer: reference config couples the carriers") {
  TransferModel tm = build_transfer(reference_config(), kTwoPi * 2e4);
  CHECK(tm.M.block<2, 2>(0, 2).cwiseAbs().maxCoeff() > 0.1);
  CHECK(tm.S_F > 0.0);
}

TEST_CASE("output_covariance: vacuum identity at zero coupling") {
  SimConfig cfg = reference_config();
  cfg.carrier.circulating_power = 0.0;
  cfg.subcarrier.circulating_power = 0.0;
  for (double f : {1e3, 1e4, 1e5}) {
    CovarianceMatrix v = output_covariance(cfg, kTwoPi * f);
    CHECK((v.entries() - 0.5 * Eigen::Matrix4d::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
  }

  SimConfig heavy = reference_config();
  for (auto& mode : heavy.modes.modes) mode.effective_mass = 1e9;
  CovarianceMatrix v = output_covariance(heavy, kTwoPi * 2e4);
  CHECK((v.entries() - 0.5 * Eigen::Matrix4d::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
}

TEST_CASE("output_covariance: purity for the lossless symmetric variant") {
  SimConfig cfg = reference_config();
  cfg.round_trip_loss = 1e-12;
  cfg.temperature = 0.0;
  cfg.subcarrier.detuning = cfg.carrier.detuning;  // symmetric detunings
  for (auto& mode : cfg.modes.modes) mode.quality_factor = 1e15;

  for (double f : {5e3, 2e4, 6e4}) {
    CovarianceMatrix v = output_covariance(cfg, kTwoPi * f);
    auto [nu_min, nu_max] = symplectic_eigenvalues(v);
    CHECK(std::abs(nu_min - 0.5) <= 1e-8);
    CHECK(std::abs(nu_max - 0.5) <= 1e-8);
    CHECK(std::abs(v.entries().determinant() - 1.0 / 16.0) <= 1e-8);
  }
}

TEST_CASE("output_covariance: reference point reproduces the published scale") {
  CovarianceMatrix v = output_covariance(reference_config(), kTwoPi * 2e4);
  double e_n = log_negativity(v).value;
  CHECK(e_n > 0.05);
  CHECK(e_n < 0.20);
  CHECK(e_n == doctest::Approx(0.1198).epsilon(0.05));  // frozen model value
}

TEST_CASE("output_covariance: every produced matrix is physical") {
  std::vector<SimConfig> configs;
  configs.push_back(reference_config());
  configs.push_back(reference_config());
  configs.back().temperature = 4.0;
  configs.push_back(reference_config());
  configs.back().round_trip_loss = 5000.0;
  configs.push_back(reference_config());
  configs.back().carrier.circulating_power = 0.0;
  for (const auto& cfg : configs) {
    for (double f : {1e3, 4.3e3, 2e4, 5.4e4, 9e4}) {
      CovarianceMatrix v = output_covariance(cfg, kTwoPi * f);
      CHECK(validate_cm(v).physical);
    }
  }
}

TEST_CASE("quantum_thermal_ratio limits") {
  SimConfig cfg = reference_config();
  double omega = kTwoPi * 2e4;

  SimConfig dark = cfg;
  dark.carrier.circulating_power = 0.0;
  dark.subcarrier.circulating_power = 0.0;
  CHECK(quantum_thermal_ratio(dark, omega) == 0.0);

  double at_295 = quantum_thermal_ratio(cfg, omega);
  CHECK(at_295 > 1.0);  // quantum-dominated in the entangling band

  SimConfig hot = cfg;
  hot.temperature = 295.0e6;
  CHECK(quantum_thermal_ratio(hot, omega) ==
        doctest::Approx(at_295 / 1e6).epsilon(1e-9));
}

TEST_CASE("stability: double spring stable, single spring not") {
  StabilityReport ref = stability_check(reference_config());
  CHECK(ref.stable);
  CHECK(ref.max_growth_rate < 0.0);
  CHECK(ref.margin > 0.0);

  SimConfig single = reference_config();
  single.subcarrier.circulating_power = 0.0;
  StabilityReport lone = stability_check(single);
  CHECK_FALSE(lone.stable);
  CHECK(lone.max_growth_rate > 0.0);

  SimConfig sub_only = reference_config();
  sub_only.carrier.circulating_power = 0.0;
  CHECK_FALSE(stability_check(sub_only).stable);

  SimConfig dark = reference_config();
  dark.carrier.circulating_power = 0.0;
  dark.subcarrier.circulating_power = 0.0;
  StabilityReport off = stability_check(dark);
  CHECK(off.stable);
  CHECK(off.margin == doctest::Approx(1.0));
}
