#include "alsm/alsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "alsm/errors.hpp"
#include "alsm/parallel.hpp"
#include "alsm/rng.hpp"
#include "alsm/specfun.hpp"

namespace alsm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  if (m == -kInf) return -kInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// (1+theta)(1-e^(-theta c)) - theta c, divided by c^2; the removable
// part of the UniformTail pdf. Series sum_{m>=2} (-1)^m theta^(m-1)
// (m-theta) c^(m-2) / m! for small c, direct with expm1 otherwise.
double uniform_hump(double theta, double c) {
  if (c < 0.5) {
    double sum = 0.0;
    double pw = 1.0;       // theta^(m-1) c^(m-2) / m! at m = 2 -> theta/2
    double mfact = 2.0;    // m!
    double theta_pow = theta;
    double c_pow = 1.0;
    for (int m = 2; m <= 60; ++m) {
      pw = theta_pow * c_pow / mfact;
      const double term = (m % 2 == 0 ? 1.0 : -1.0) * pw * (m - theta);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17 && m > 3) break;
      theta_pow *= theta;
      c_pow *= c;
      mfact *= (m + 1);
    }
    return sum;
  }
  return (-(1.0 + c) * std::expm1(-theta * c) - theta * c) / (c * c);
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

std::string family_tag(Family f) {
  switch (f) {
    case Family::TwoPoint: return "tp-al";
    case Family::ShiftedExp: return "se-al";
    case Family::UnimodalGamma: return "ug-al";
    case Family::InverseGaussian: return "ig-al";
    case Family::PowerFunction: return "pf-al";
    case Family::Pareto: return "p-al";
    case Family::UniformTail: return "u-al";
    case Family::GammaApp: return "g-al";
  }
  return "?";
}

std::optional<Family> family_from_tag(const std::string& tag) {
  for (Family f : kAllFamilies)
    if (family_tag(f) == tag) return f;
  return std::nullopt;
}

MixingLaw MixingLaw::two_point(double t1, double t2) {
  MixingLaw m{Family::TwoPoint, t1, t2};
  m.validate();
  return m;
}
MixingLaw MixingLaw::shifted_exp(double t) {
  return make(Family::ShiftedExp, t);
}
MixingLaw MixingLaw::unimodal_gamma(double t) {
  return make(Family::UnimodalGamma, t);
}
MixingLaw MixingLaw::inverse_gaussian(double t) {
  return make(Family::InverseGaussian, t);
}
MixingLaw MixingLaw::power_function(double t) {
  return make(Family::PowerFunction, t);
}
MixingLaw MixingLaw::pareto(double t) { return make(Family::Pareto, t); }
MixingLaw MixingLaw::uniform_tail(double t) {
  return make(Family::UniformTail, t);
}
MixingLaw MixingLaw::gamma_app(double t) { return make(Family::GammaApp, t); }

MixingLaw MixingLaw::make(Family f, double theta1, double theta2) {
  MixingLaw m{f, theta1, theta2};
  m.validate();
  return m;
}

void MixingLaw::validate() const {
  switch (family) {
    case Family::TwoPoint:
      require(std::isfinite(theta1) && theta1 > 0.5 && theta1 < 1.0,
              "TwoPoint: theta1 must lie in (1/2, 1)");
      require(std::isfinite(theta2) && theta2 > 1.0,
              "TwoPoint: theta2 must be > 1");
      return;
    case Family::UniformTail:
      require(std::isfinite(theta1) && theta1 > 0.0 && theta1 < 1.0,
              "UniformTail: theta must lie in (0, 1)");
      return;
    default:
      require(std::isfinite(theta1) && theta1 > 0.0,
              "mixing law: theta must be > 0");
      return;
  }
}

double p_r(int r, double kappa) {
  if (r < 0) throw std::domain_error("p_r: r must be >= 0");
  if (!(kappa > 0.0)) throw std::domain_error("p_r: kappa must be > 0");
  const double k2 = kappa * kappa;
  const double sign = r % 2 == 0 ? 1.0 : -1.0;
  return (1.0 + sign * std::pow(k2, r + 1)) / (1.0 + k2);
}

std::optional<double> inv_w_moment_opt(const MixingLaw& m, int r) {
  if (r < 1) throw std::domain_error("inv_w_moment: r must be >= 1");
  const double t = m.theta1;
  switch (m.family) {
    case Family::TwoPoint:
      return t + (1.0 - t) * std::pow(m.theta2, r);
    case Family::ShiftedExp:
      // theta e^theta E_r(theta), evaluated scaled
      return t * gen_exp_integral_scaled(r, t);
    case Family::UnimodalGamma: {
      if (r >= 2 && t >= 1.0 / (r - 1)) return std::nullopt;
      double prod = 1.0;
      for (int j = 1; j <= r; ++j) prod *= 1.0 + t - j * t;
      return 1.0 / prod;
    }
    case Family::InverseGaussian: {
      const double root = std::sqrt(3.0 * t + 1.0);
      const double x = root / t;
      return std::sqrt(2.0 / (t * 3.141592653589793)) *
             std::pow(3.0 * t + 1.0, (1.0 - 2.0 * r) / 4.0) *
             bessel_k_scaled(0.5 + r, x);
    }
    case Family::PowerFunction:
      if (t <= r) return std::nullopt;
      return t / (t - r);
    case Family::Pareto:
      return t / (t + r);
    case Family::UniformTail:
      if (r == 1) return -std::log1p(-t) / t;
      return (std::pow(1.0 - t, 1.0 - r) - 1.0) / (t * (r - 1));
    case Family::GammaApp: {
      if (t <= 2.0 * r) return std::nullopt;
      double prod = 1.0;
      for (int j = 1; j <= r; ++j) prod *= t - 2.0 * j;
      return std::pow(t, r) / prod;
    }
  }
  return std::nullopt;
}

double inv_w_moment(const MixingLaw& m, int r) {
  const auto v = inv_w_moment_opt(m, r);
  if (!v)
    throw MomentDoesNotExistError("E(1/W^" + std::to_string(r) +
                                  ") does not exist for " +
                                  family_tag(m.family) +
                                  " at theta=" + std::to_string(m.theta1));
  return *v;
}

std::pair<double, double> mixing_support(const MixingLaw& m) {
  switch (m.family) {
    case Family::TwoPoint: return {1.0 / m.theta2, 1.0};
    case Family::ShiftedExp: return {1.0, kInf};
    case Family::UnimodalGamma: return {0.0, kInf};
    case Family::InverseGaussian: return {0.0, kInf};
    case Family::PowerFunction: return {0.0, 1.0};
    case Family::Pareto: return {1.0, kInf};
    case Family::UniformTail: return {1.0 - m.theta1, 1.0};
    case Family::GammaApp: return {0.0, kInf};
  }
  return {0.0, kInf};
}

double mixing_pdf(const MixingLaw& m, double w) {
  const double t = m.theta1;
  switch (m.family) {
    case Family::TwoPoint:
      throw std::domain_error("mixing_pdf: TwoPoint has no density");
    case Family::ShiftedExp:
      return w > 1.0 ? t * std::exp(-t * (w - 1.0)) : 0.0;
    case Family::UnimodalGamma: {
      if (!(w > 0.0)) return 0.0;
      const double a = 1.0 / t + 1.0;
      return std::exp((a - 1.0) * std::log(w) - w / t - a * std::log(t) -
                      std::lgamma(a));
    }
    case Family::InverseGaussian: {
      if (!(w > 0.0)) return 0.0;
      const double root = std::sqrt(3.0 * t + 1.0);
      return std::sqrt((3.0 * t + 1.0) /
                       (2.0 * 3.141592653589793 * t * w * w * w)) *
             std::exp(-(w - root) * (w - root) / (2.0 * t * w));
    }
    case Family::PowerFunction:
      return w > 0.0 && w < 1.0 ? t * std::pow(w, t - 1.0) : 0.0;
    case Family::Pareto:
      return w > 1.0 ? t * std::pow(w, -t - 1.0) : 0.0;
    case Family::UniformTail:
      return w > 1.0 - t && w < 1.0 ? 1.0 / t : 0.0;
    case Family::GammaApp: {
      if (!(w > 0.0)) return 0.0;
      const double a = 0.5 * t;
      return std::exp(a * std::log(a) + (a - 1.0) * std::log(w) - a * w -
                      std::lgamma(a));
    }
  }
  return 0.0;
}

double log_f_delta(const MixingLaw& m, double d) {
  const double t = m.theta1;
  switch (m.family) {
    case Family::TwoPoint:
      return logsumexp2(std::log(t) - d,
                        std::log1p(-t) - std::log(m.theta2) - d / m.theta2);
    case Family::ShiftedExp:
      return std::log(t) + std::log1p(t + d) - 2.0 * std::log(t + d) - d;
    case Family::UnimodalGamma:
      return std::log1p(t) - (1.0 / t + 2.0) * std::log1p(t * d);
    case Family::InverseGaussian: {
      const double u = 2.0 * t * d;
      const double root_u = std::sqrt(1.0 + u);
      // sqrt(1+3t)/t * (1 - sqrt(1+2td)) with the difference folded
      // into a cancellation-free quotient
      return 0.5 * std::log1p(3.0 * t) -
             2.0 * d * std::sqrt(1.0 + 3.0 * t) / (1.0 + root_u) -
             0.5 * std::log1p(u);
    }
    case Family::PowerFunction: {
      if (d <= 0.0) return std::log(t / (t + 1.0));
      if (d < t + 2.0)
        return std::log(t) - std::log1p(t) - d +
               std::log(detail::lower_gamma_series_sum(t + 1.0, d));
      return std::log(t) + std::lgamma(t + 1.0) +
             log_regularized_gamma_p(t + 1.0, d) - (t + 1.0) * std::log(d);
    }
    case Family::Pareto:
      return std::log(t) - d + std::log(gen_exp_integral_scaled(t, d));
    case Family::UniformTail:
      return -std::log(t) + (t - 1.0) * d + std::log(uniform_hump(t, d));
    case Family::GammaApp:
      return -(0.5 * t + 1.0) * std::log1p(2.0 * d / t);
  }
  return -kInf;
}

double alsm_logpdf(double x, const ALSMParams& p) {
  const double k = p.al.kappa;
  return std::log(k) - std::log(p.al.beta) - std::log1p(k * k) +
         log_f_delta(p.mixing, delta(x, p.al));
}

double alsm_pdf(double x, const ALSMParams& p) {
  return std::exp(alsm_logpdf(x, p));
}

double alsm_pdf_numeric(double x, const ALSMParams& p,
                        const QuadratureConfig& cfg) {
  if (p.mixing.family == Family::TwoPoint) {
    const ALParams wide{p.al.mu, p.al.beta * p.mixing.theta2, p.al.kappa};
    return p.mixing.theta1 * al_pdf(x, p.al) +
           (1.0 - p.mixing.theta1) * al_pdf(x, wide);
  }
  const auto [lo, hi] = mixing_support(p.mixing);
  auto f = [&](double w) {
    const ALParams cond{p.al.mu, p.al.beta / w, p.al.kappa};
    return al_pdf(x, cond) * mixing_pdf(p.mixing, w);
  };
  return adaptive_quadrature(f, lo, hi, cfg);
}

Moments alsm_moments(const ALSMParams& p) {
  const double k = p.al.kappa;
  const double c = p.al.beta / k;
  std::optional<double> e[5];
  for (int r = 1; r <= 4; ++r) e[r] = inv_w_moment_opt(p.mixing, r);

  Moments out;
  if (!e[1]) return out;
  const double m1 = c * p_r(1, k) * (*e[1]);
  out.mean = p.al.mu + m1;
  if (!e[2]) return out;
  const double m2 = 2.0 * c * c * p_r(2, k) * (*e[2]);
  const double var = m2 - m1 * m1;
  out.variance = var;
  if (!e[3]) return out;
  const double m3 = 6.0 * c * c * c * p_r(3, k) * (*e[3]);
  out.skewness = (m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1) / std::pow(var, 1.5);
  if (!e[4]) return out;
  const double m4 = 24.0 * c * c * c * c * p_r(4, k) * (*e[4]);
  out.kurtosis =
      (m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1) /
      (var * var);
  return out;
}

std::optional<double> alsm_abs_moment(const ALSMParams& p, double a) {
  if (!(a > -1.0)) throw std::domain_error("alsm_abs_moment: need a > -1");
  if (a == 0.0) return 1.0;

  std::optional<double> ew;  // E(1/W^a)
  const double rounded = std::round(a);
  if (a >= 1.0 && rounded == a) {
    ew = inv_w_moment_opt(p.mixing, static_cast<int>(rounded));
  } else if (p.mixing.family == Family::TwoPoint) {
    ew = p.mixing.theta1 +
         (1.0 - p.mixing.theta1) * std::pow(p.mixing.theta2, a);
  } else {
    // Existence of int w^-a h(w) dw near the support edges.
    const double t = p.mixing.theta1;
    bool exists = true;
    switch (p.mixing.family) {
      case Family::UnimodalGamma: exists = a < 1.0 / t + 1.0; break;
      case Family::PowerFunction: exists = a < t; break;
      case Family::GammaApp: exists = a < 0.5 * t; break;
      case Family::Pareto: exists = t + a > 0.0; break;
      default: break;
    }
    if (!exists) return std::nullopt;
    const auto [lo, hi] = mixing_support(p.mixing);
    ew = adaptive_quadrature(
        [&](double w) { return std::pow(w, -a) * mixing_pdf(p.mixing, w); },
        lo, hi, {1e-12, 1e-12, 2000});
  }
  if (!ew) return std::nullopt;
  const double k = p.al.kappa;
  return std::pow(p.al.beta / k, a) * std::tgamma(a + 1.0) *
         (1.0 + std::pow(k, 2.0 * (a + 1.0))) / (1.0 + k * k) * (*ew);
}

std::vector<double> mixing_sample(const MixingLaw& m, std::size_t n,
                                  std::uint64_t seed) {
  m.validate();
  std::vector<double> out(n);
  const std::size_t chunk = 1 << 16;
  const std::size_t nchunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
  for_each_index(nchunks, [&](std::size_t c) {
    Rng rng = Rng::derived(seed, c);
    const std::size_t lo = c * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    const double t = m.theta1;
    for (std::size_t i = lo; i < hi; ++i) {
      switch (m.family) {
        case Family::TwoPoint:
          out[i] = rng.uniform() < t ? 1.0 : 1.0 / m.theta2;
          break;
        case Family::ShiftedExp:
          out[i] = 1.0 + rng.exponential() / t;
          break;
        case Family::UnimodalGamma:
          out[i] = rng.gamma(1.0 / t + 1.0) * t;
          break;
        case Family::InverseGaussian: {
          const double root = std::sqrt(3.0 * t + 1.0);
          out[i] = rng.inverse_gaussian(root, (3.0 * t + 1.0) / t);
          break;
        }
        case Family::PowerFunction:
          out[i] = std::pow(rng.uniform_pos(), 1.0 / t);
          break;
        case Family::Pareto:
          out[i] = std::pow(rng.uniform_pos(), -1.0 / t);
          break;
        case Family::UniformTail:
          out[i] = 1.0 - t + t * rng.uniform();
          break;
        case Family::GammaApp:
          out[i] = rng.gamma(0.5 * t) / (0.5 * t);
          break;
      }
    }
  });
  return out;
}

std::vector<double> alsm_sample(const ALSMParams& p, std::size_t n,
                                std::uint64_t seed) {
  p.validate();
  std::vector<double> out(n);
  const std::size_t chunk = 1 << 16;
  const std::size_t nchunks = n == 0 ? 0 : (n + chunk - 1) / chunk;
  const ALParams unit{0.0, 1.0, p.al.kappa};
  for_each_index(nchunks, [&](std::size_t c) {
    Rng rng = Rng::derived(seed, c);
    const std::size_t lo = c * chunk;
    const std::size_t hi = lo + chunk < n ? lo + chunk : n;
    const double t = p.mixing.theta1;
    for (std::size_t i = lo; i < hi; ++i) {
      const double e1 = rng.exponential();
      const double e2 = rng.exponential();
      const double y = e1 / unit.kappa - unit.kappa * e2;
      double w = 1.0;
      switch (p.mixing.family) {
        case Family::TwoPoint:
          w = rng.uniform() < t ? 1.0 : 1.0 / p.mixing.theta2;
          break;
        case Family::ShiftedExp:
          w = 1.0 + rng.exponential() / t;
          break;
        case Family::UnimodalGamma:
          w = rng.gamma(1.0 / t + 1.0) * t;
          break;
        case Family::InverseGaussian: {
          const double root = std::sqrt(3.0 * t + 1.0);
          w = rng.inverse_gaussian(root, (3.0 * t + 1.0) / t);
          break;
        }
        case Family::PowerFunction:
          w = std::pow(rng.uniform_pos(), 1.0 / t);
          break;
        case Family::Pareto:
          w = std::pow(rng.uniform_pos(), -1.0 / t);
          break;
        case Family::UniformTail:
          w = 1.0 - t + t * rng.uniform();
          break;
        case Family::GammaApp:
          w = rng.gamma(0.5 * t) / (0.5 * t);
          break;
      }
      out[i] = p.al.mu + p.al.beta * y / w;
    }
  });
  return out;
}

double alsm_mode(const ALSMParams& p) { return p.al.mu; }

double tp_posterior_good(double x, const ALSMParams& p) {
  if (p.mixing.family != Family::TwoPoint)
    throw std::invalid_argument("tp_posterior_good: mixing is not TwoPoint");
  const double d = delta(x, p.al);
  const double v = std::exp(std::log(p.mixing.theta1) - d -
                            log_f_delta(p.mixing, d));
  return std::min(1.0, v);
}

double alsm_loglik(std::span<const double> data, const ALSMParams& p) {
  const double k = p.al.kappa;
  const double logc =
      std::log(k) - std::log(p.al.beta) - std::log1p(k * k);
  const double sum = sum_over_index(data.size(), [&](std::size_t i) {
    return log_f_delta(p.mixing, delta(data[i], p.al));
  });
  return static_cast<double>(data.size()) * logc + sum;
}

}  // namespace alsm
