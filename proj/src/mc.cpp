#include "entangler/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "entangler/measures.hpp"

namespace entangler {

namespace {

constexpr long kChunk = 4096;  // draws per derived-seed partition

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double empirical_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * (sorted.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

double Rng::uniform() {
  // 53-bit mantissa in [0, 1).
  return (engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (index * 0xD1B54A32D192ED03ull);
  std::uint64_t out = splitmix64(state);
  out ^= splitmix64(state);
  return out;
}

CovarianceMatrix perturb_cm(const CovarianceMatrix& V, double sigma, Rng& rng,
                            bool absolute_sigma) {
  Eigen::Matrix4d m = V.entries();
  double diag_scale = m.diagonal().cwiseAbs().mean();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double std_dev;
      if (absolute_sigma) {
        std_dev = sigma;
      } else {
        double magnitude = std::abs(m(i, j));
        std_dev = sigma * (magnitude > 0.0 ? magnitude : diag_scale);
      }
      double noisy = m(i, j) + std_dev * rng.gaussian();
      m(i, j) = noisy;
      m(j, i) = noisy;
    }
  }
  return CovarianceMatrix(m, V.normalization());
}

McResult en_distribution(const CovarianceMatrix& V, const McConfig& mc,
                         int workers, std::vector<double>* draws) {
  long samples = std::max(mc.samples, 1L);
  std::vector<double> values(samples);
  std::vector<char> clamped(samples, 0);

  long chunks = (samples + kChunk - 1) / kChunk;
  auto run_chunk = [&](long chunk) {
    Rng rng(derive_seed(mc.seed, static_cast<std::uint64_t>(chunk)));
    long begin = chunk * kChunk;
    long end = std::min(begin + kChunk, samples);
    for (long i = begin; i < end; ++i) {
      CovarianceMatrix draw =
          perturb_cm(V, mc.sigma, rng, mc.absolute_sigma);
      MeasureResult en = log_negativity(draw);
      values[i] = en.value;
      clamped[i] = (en.value == 0.0 || en.status != MeasureStatus::Ok) ? 1 : 0;
    }
  };

  int n_workers = workers <= 0
                      ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))
                      : workers;
  n_workers = static_cast<int>(std::max<long>(1, std::min<long>(n_workers, chunks)));
  if (n_workers == 1) {
    for (long chunk = 0; chunk < chunks; ++chunk) run_chunk(chunk);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        for (long chunk = w; chunk < chunks; chunk += n_workers)
          run_chunk(chunk);
      });
    }
    for (auto& t : pool) t.join();
  }

  McResult result;
  result.samples = samples;
  result.sigma = mc.sigma;

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= samples;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = samples > 1 ? var / (samples - 1) : 0.0;
  long n_clamped = 0;
  for (char flag : clamped) n_clamped += flag;

  result.mean_en = mean;
  result.std_en = std::sqrt(var);
  result.clamped_fraction = static_cast<double>(n_clamped) / samples;

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  result.ci67_low = empirical_quantile(sorted, 0.165);
  result.ci67_high = empirical_quantile(sorted, 0.835);

  if (draws) *draws = std::move(values);
  return result;
}

PrecisionResult required_precision(const CovarianceMatrix& V,
                                   double target_ratio, std::uint64_t seed,
                                   long samples) {
  MeasureResult base = log_negativity(V);
  if (base.status != MeasureStatus::Ok || base.value <= 0.0)
    return {0.0, false};

  samples = std::max(samples, 10000L);
  // Common random numbers: the same seed at every bisection step makes
  // std(sigma) a deterministic, monotone function of sigma.
  auto ratio_at = [&](double sigma) {
    McConfig mc;
    mc.sigma = sigma;
    mc.samples = samples;
    mc.seed = seed;
    return en_distribution(V, mc).std_en / base.value;
  };

  double lo = 1e-6;
  if (ratio_at(lo) > target_ratio) return {lo, false};

  // The ratio grows with sigma in the linear-response regime but collapses
  // again once most draws clamp to zero, so bracket the first upward
  // crossing by marching up instead of probing a fixed upper endpoint.
  constexpr double kSigmaMax = 1e-1;
  double hi = lo;
  bool bracketed = false;
  while (hi < kSigmaMax) {
    double next = std::min(hi * 2.0, kSigmaMax);
    if (ratio_at(next) > target_ratio) {
      lo = hi;
      hi = next;
      bracketed = true;
      break;
    }
    hi = next;
  }
  if (!bracketed) return {kSigmaMax, true};

  double mid = std::sqrt(lo * hi);
  for (int iter = 0; iter < 60; ++iter) {
    mid = std::sqrt(lo * hi);
    double r = ratio_at(mid);
    if (std::abs(r - target_ratio) <= 0.05 * target_ratio) break;
    if (r > target_ratio) hi = mid;
    else lo = mid;
    if (hi / lo < 1.0 + 1e-6) break;
  }
  return {mid, true};
}

}  // namespace entangler
