#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wt {

// Deterministic seeded RNG stream. Stream s of seed q seeds a mt19937_64
// engine with SplitMix64(q + s * 0x9E3779B97F4A7C15); all variate transforms
// below are implemented here (not via std distributions) so that output is
// bit-identical across platforms and standard library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : eng_(mix(seed + stream * 0x9E3779B97F4A7C15ULL)) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  // Box-Muller with cache.
  double normal() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * 3.14159265358979323846 * uniform();
    cache_ = r * std::sin(a);
    have_cache_ = true;
    return r * std::cos(a);
  }

  // Marsaglia-Tsang; shape < 1 boosted via G(a) = G(a+1) * U^{1/a}.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // One-sided positive stable with index alpha in (0,1), Chambers-Mallows-Stuck.
  double pos_stable(double alpha) {
    const double v = 3.14159265358979323846 * uniform();
    const double e = exponential();
    const double s = std::sin(alpha * v) / std::pow(std::sin(v), 1.0 / alpha) *
                     std::pow(std::sin((1.0 - alpha) * v) / e,
                              (1.0 - alpha) / alpha);
    return s;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 eng_;
  double cache_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace wt
