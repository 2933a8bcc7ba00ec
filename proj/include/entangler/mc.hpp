#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "entangler/covariance.hpp"

namespace entangler {

// Named generator so draw sequences are reproducible: mt19937_64 with a
// hand-rolled Box-Muller transform (std::normal_distribution's sequence is
// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();   // [0, 1)
  double gaussian();  // standard normal

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// splitmix64-derived stream seed for partition `index` of a run seeded with
// `seed`; gives worker-count-independent draw sequences.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct McConfig {
  double sigma = 0.01;           // per-entry Gaussian std
  bool absolute_sigma = false;   // default: relative to entry magnitude
  long samples = 10000;
  std::uint64_t seed = 1;
};

struct McResult {
  double mean_en = 0.0;
  double std_en = 0.0;
  double ci67_low = 0.0;
  double ci67_high = 0.0;
  double clamped_fraction = 0.0;  // draws hitting the E_N = 0 clamp or flagged
  long samples = 0;
  double sigma = 0.0;
};

// Independent Gaussian noise on the 10 free entries of the symmetric matrix;
// std = sigma * |entry| (relative mode; zero entries fall back to
// sigma * mean |diagonal|). The draw is NOT projected back to physicality.
CovarianceMatrix perturb_cm(const CovarianceMatrix& V, double sigma, Rng& rng,
                            bool absolute_sigma = false);

// E_N statistics over perturbed copies of V. Deterministic for a fixed seed
// regardless of worker count. Optionally records every draw.
McResult en_distribution(const CovarianceMatrix& V, const McConfig& mc,
                         int workers = 0, std::vector<double>* draws = nullptr);

struct PrecisionResult {
  double sigma = 0.0;
  bool achievable = true;
};

// Bisection for the sigma where std_EN / E_N(V) crosses target_ratio, using
// common random numbers across steps. Search bracket [1e-6, 1e-1].
PrecisionResult required_precision(const CovarianceMatrix& V, double target_ratio,
                                   std::uint64_t seed = 12345,
                                   long samples = 10000);

}  // namespace entangler
