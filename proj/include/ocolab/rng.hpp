#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ocolab/vec.hpp"

namespace ocolab {

// Deterministic random source. All draws are derived from raw mt19937_64
// output so a given seed reproduces the same stream bit-exactly regardless
// of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // +1 or -1 with equal probability.
  double sign() { return (eng_() >> 63) ? 1.0 : -1.0; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Vec normal_vec(int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  double gamma(double shape) {
    if (shape < 1.0) {
      // Boost to shape+1 and rescale (Marsaglia-Tsang trick).
      const double u = std::max(uniform(), 1e-300);
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    if (a == 1.0 && b == 1.0) return uniform();
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ocolab
