#ifndef ALSM_RNG_HPP
#define ALSM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

// Seeded generator with explicit variate transforms. The transforms
// are spelled out here (rather than using std::*_distribution) so a
// given seed produces the same stream on every platform and toolchain.

namespace alsm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  // Derive an independent stream, e.g. one per sampling chunk.
  static Rng derived(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream + 0x51ab61dull)));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential() { return -std::log(uniform_pos()); }

  double normal() {
    // Polar Box-Muller without caching the second variate.
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  // Gamma(shape, 1) by Marsaglia-Tsang, with the boost for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0)
      return gamma(shape + 1.0) * std::pow(uniform_pos(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double gamma(double shape, double rate) { return gamma(shape) / rate; }

  // Inverse Gaussian(mean, lambda) by Michael-Schucany-Haas.
  double inverse_gaussian(double mean, double lambda) {
    const double nu = normal();
    const double y = nu * nu;
    const double x = mean + mean * mean * y / (2.0 * lambda) -
                     (mean / (2.0 * lambda)) *
                         std::sqrt(4.0 * mean * lambda * y +
                                   mean * mean * y * y);
    return uniform() <= mean / (mean + x) ? x : mean * mean / x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alsm

#endif
