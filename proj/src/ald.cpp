#include "alsm/ald.hpp"

#include <cmath>
#include <stdexcept>

#include "alsm/errors.hpp"
#include "alsm/fit.hpp"
#include "alsm/parallel.hpp"
#include "alsm/rng.hpp"

namespace alsm {

void ALParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(beta) || !std::isfinite(kappa))
    throw std::invalid_argument("ALParams: parameters must be finite");
  if (!(beta > 0.0)) throw std::invalid_argument("ALParams: beta must be > 0");
  if (!(kappa > 0.0))
    throw std::invalid_argument("ALParams: kappa must be > 0");
}

double delta(double x, const ALParams& p) {
  return x >= p.mu ? (p.kappa / p.beta) * (x - p.mu)
                   : (p.mu - x) / (p.kappa * p.beta);
}

double al_logpdf(double x, const ALParams& p) {
  return std::log(p.kappa) - std::log(p.beta) -
         std::log1p(p.kappa * p.kappa) - delta(x, p);
}

double al_pdf(double x, const ALParams& p) { return std::exp(al_logpdf(x, p)); }

ALMoments al_moments(const ALParams& p) {
  const double k = p.kappa;
  const double ik = 1.0 / k;
  const double s2 = ik * ik + k * k;
  ALMoments m;
  m.mean = p.mu + p.beta * (ik - k);
  m.variance = p.beta * p.beta * s2;
  m.skewness = 2.0 * (ik * ik * ik - k * k * k) / std::pow(s2, 1.5);
  m.kurtosis = 9.0 - 12.0 / (s2 * s2);
  return m;
}

std::vector<double> al_sample(const ALParams& p, std::size_t n,
                              std::uint64_t seed) {
  p.validate();
  std::vector<double> out(n);
  const std::size_t chunk = 1 << 16;
  const std::size_t nchunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
  for_each_index(nchunks, [&](std::size_t c) {
    Rng rng = Rng::derived(seed, c);
    const std::size_t lo = c * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    for (std::size_t i = lo; i < hi; ++i) {
      const double e1 = rng.exponential();
      const double e2 = rng.exponential();
      out[i] = p.mu + p.beta * (e1 / p.kappa - p.kappa * e2);
    }
  });
  return out;
}

ALFit al_fit(std::span<const double> data) {
  if (data.size() < 3)
    throw std::invalid_argument("al_fit: need at least 3 observations");
  const std::vector<double> unit(data.size(), 1.0);
  const Q1Solution s = maximize_q1(data, unit);
  ALFit fit;
  fit.params = {s.mu, s.beta, s.kappa};
  fit.loglik = sum_over_index(data.size(), [&](std::size_t i) {
    return al_logpdf(data[i], fit.params);
  });
  return fit;
}

}  // namespace alsm
