#include "alsm/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "alsm/errors.hpp"

namespace alsm {
namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kTiny = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Series for P(s,x), valid (and fastest) for x < s+1. Returns the sum
// such that P = exp(s*log(x) - x - lgamma(s+1)) * sum.
double gser_sum(double s, double x) {
  double term = 1.0;
  double sum = 1.0;
  double ap = s;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum;
}

// Lentz continued fraction for Q(s,x), valid for x >= s+1. Returns cf
// such that Gamma(s,x) = exp(-x + s*log(x)) * cf.
double gcf(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

void check_gamma_args(double s, double x) {
  if (!(x >= 0.0)) throw std::domain_error("incomplete gamma: x must be >= 0");
  if (s <= 0.0 && x == 0.0)
    throw std::domain_error("incomplete gamma: divergent for s <= 0 at x = 0");
}

// E_1(x), x > 0.
double expint_e1(double x) {
  if (x <= 1.0) {
    // -gamma - log x + sum (-1)^(n+1) x^n / (n n!)
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n <= 60; ++n) {
      term *= -x / n;
      const double add = -term / n;
      sum += add;
      if (std::abs(add) < std::abs(sum) * kEps) break;
    }
    return -0.5772156649015328606 - std::log(x) + sum;
  }
  return std::exp(-x) * gen_exp_integral_scaled(1.0, x);
}

double upper_gamma_nonpositive_s(double s, double x) {
  // Seed at the fractional part of s (or at 0 for integer s) and
  // descend Gamma(s-1,x) = [Gamma(s,x) - x^(s-1) e^(-x)] / (s-1).
  double s0 = s - std::floor(s);
  double g;
  if (s0 == 0.0) {
    g = expint_e1(x);  // Gamma(0,x)
  } else {
    g = upper_incomplete_gamma(s0, x);
  }
  const double emx = std::exp(-x);
  for (double t = s0; t > s + 0.5; t -= 1.0) {
    const double sm1 = t - 1.0;
    g = (g - std::pow(x, sm1) * emx) / sm1;
  }
  return g;
}

// Integrand helpers ------------------------------------------------------

QuadratureConfig tight_cfg() {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-305;
  cfg.rel_tol = 1e-13;
  cfg.max_subdivisions = 2000;
  return cfg;
}

}  // namespace

namespace detail {
double lower_gamma_series_sum(double s, double x) { return gser_sum(s, x); }
}  // namespace detail

double regularized_gamma_p(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("regularized gamma: s must be > 0");
  check_gamma_args(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) {
    const double lp =
        s * std::log(x) - x - std::lgamma(s + 1.0) + std::log(gser_sum(s, x));
    return std::exp(lp);
  }
  return 1.0 - regularized_gamma_q(s, x);
}

double regularized_gamma_q(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("regularized gamma: s must be > 0");
  check_gamma_args(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return 1.0 - regularized_gamma_p(s, x);
  const double lq = s * std::log(x) - x - std::lgamma(s) + std::log(gcf(s, x));
  return std::exp(lq);
}

double log_regularized_gamma_p(double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("regularized gamma: s must be > 0");
  check_gamma_args(s, x);
  if (x == 0.0) return -kInf;
  if (x < s + 1.0)
    return s * std::log(x) - x - std::lgamma(s + 1.0) +
           std::log(gser_sum(s, x));
  return std::log1p(-regularized_gamma_q(s, x));
}

double upper_incomplete_gamma(double s, double x) {
  check_gamma_args(s, x);
  if (s <= 0.0) return upper_gamma_nonpositive_s(s, x);
  if (x == 0.0) return std::tgamma(s);
  if (x >= s + 1.0)
    return std::exp(-x + s * std::log(x)) * gcf(s, x);
  return std::tgamma(s) * (1.0 - regularized_gamma_p(s, x));
}

double upper_incomplete_gamma_scaled(double s, double x) {
  if (!(s > 0.0))
    throw std::domain_error("scaled upper gamma: s must be > 0");
  check_gamma_args(s, x);
  if (x == 0.0) return std::tgamma(s);
  if (x >= s + 1.0) return std::exp(s * std::log(x)) * gcf(s, x);
  return std::exp(x) * std::tgamma(s) * (1.0 - regularized_gamma_p(s, x));
}

double lower_incomplete_gamma(double s, double x) {
  if (!(s > 0.0))
    throw std::domain_error("lower incomplete gamma: s must be > 0");
  check_gamma_args(s, x);
  return std::tgamma(s) * regularized_gamma_p(s, x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: x must be > 0");
  double result = 0.0;
  while (x < 12.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic series with Bernoulli coefficients.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                            inv2 * (1.0 / 252.0 -
                                    inv2 * (1.0 / 240.0 -
                                            inv2 * (1.0 / 132.0 -
                                                    inv2 * 691.0 / 32760.0)))));
  return result;
}

double bessel_k_scaled(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be > 0");
  nu = std::abs(nu);  // K_nu = K_-nu
  const double half_pi_over_x = std::sqrt(1.5707963267948966 / x);
  const double frac = nu - std::floor(nu);
  if (frac == 0.5) {
    // K_(1/2) = sqrt(pi/(2x)) e^-x and upward recurrence
    // K_(v+1) = K_(v-1) + (2v/x) K_v, stable in this direction.
    double km = half_pi_over_x;              // scaled K_(1/2)
    if (nu == 0.5) return km;
    double k = half_pi_over_x * (1.0 + 1.0 / x);  // scaled K_(3/2)
    for (double v = 1.5; v < nu - 0.25; v += 1.0) {
      const double kp = km + (2.0 * v / x) * k;
      km = k;
      k = kp;
    }
    return k;
  }
  // Overflow guard from the small-argument asymptotic before the
  // integral representation gets a chance to produce inf.
  if (nu > 1.0 && x < nu) {
    const double log_est = std::lgamma(nu) + nu * std::log(2.0 / x) -
                           std::log(2.0) + x;
    if (log_est > 700.0)
      throw std::overflow_error("bessel_k overflow: x near 0 with large nu");
  }
  // e^x K_nu(x) = int_0^inf exp(-2x sinh^2(t/2)) cosh(nu t) dt
  auto f = [nu, x](double t) {
    const double sh = std::sinh(0.5 * t);
    const double u = std::abs(nu * t);
    const double log_cosh = u + std::log1p(std::exp(-2.0 * u)) - std::log(2.0);
    const double expo = -2.0 * x * sh * sh + log_cosh;
    return expo < -745.0 ? 0.0 : std::exp(expo);
  };
  return adaptive_quadrature(f, 0.0, kInf, tight_cfg());
}

double bessel_k(double nu, double x) {
  const double scaled = bessel_k_scaled(nu, x);
  const double value = scaled * std::exp(-x);
  if (std::isinf(value))
    throw std::overflow_error("bessel_k overflow: x near 0 with large nu");
  return value;
}

double misra_phi(int m, double z) {
  if (m < 0) throw std::domain_error("misra_phi: m must be >= 0");
  if (!(z > 0.0)) throw std::domain_error("misra_phi: z must be > 0");
  // Gamma(m+1, z) = m! e^-z sum_{k=0}^m z^k/k!, all terms positive.
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k <= m; ++k) {
    term *= z / k;
    sum += term;
  }
  double mfact = 1.0;
  for (int k = 2; k <= m; ++k) mfact *= k;
  return mfact * std::exp(-z) * sum / std::pow(z, m + 1);
}

namespace {

// Lentz continued fraction for E_nu(z), z >= 1, nu > 0. Returns the
// scaled value e^z E_nu(z).
double expint_cf_scaled(double nu, double z) {
  double b = z + nu;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 300; ++i) {
    const double a = -i * (nu + i - 1.0);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Quadrature seed for E_nu(z) with nu in (0.5, 1.5], z < 1:
// substituting t = e^y gives int_0^inf exp((1-nu) y - z e^y) dy.
double expint_seed_quad(double nu, double z) {
  auto f = [nu, z](double y) {
    const double expo = (1.0 - nu) * y - z * std::exp(y);
    return expo < -745.0 ? 0.0 : std::exp(expo);
  };
  return adaptive_quadrature(f, 0.0, kInf, tight_cfg());
}

}  // namespace

double gen_exp_integral_scaled(double nu, double z) {
  if (!(z > 0.0)) throw std::domain_error("gen_exp_integral: z must be > 0");
  if (nu <= 0.5) {
    // E_nu(z) = z^(nu-1) Gamma(1-nu, z) with 1-nu >= 0.5.
    return std::pow(z, nu - 1.0) * upper_incomplete_gamma_scaled(1.0 - nu, z);
  }
  if (z >= 1.0) return expint_cf_scaled(nu, z);
  // Seed in (0.5, 1.5] and ascend E_(v+1) = (e^-z - z E_v)/v, which in
  // scaled form reads (1 - z Ehat_v)/v. Stable upward for z < 1.
  const int m = static_cast<int>(std::ceil(nu - 1.5));
  const double nu0 = nu - m;
  double ehat = std::exp(z) * expint_seed_quad(nu0, z);
  for (int k = 0; k < m; ++k) ehat = (1.0 - z * ehat) / (nu0 + k);
  return ehat;
}

double gen_exp_integral(double nu, double z) {
  return std::exp(-z) * gen_exp_integral_scaled(nu, z);
}

TruncGammaMoments trunc_gamma_expectations(double shape, double rate,
                                           double lo, double hi) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::domain_error("trunc_gamma_expectations: shape, rate > 0");
  if (!(lo >= 0.0) || !(hi > lo))
    throw std::domain_error("trunc_gamma_expectations: need 0 <= lo < hi");

  const bool untruncated = lo == 0.0 && std::isinf(hi);
  if (untruncated) {
    TruncGammaMoments m;
    m.mean_w = shape / rate;
    m.mean_log_w = digamma(shape) - std::log(rate);
    m.mean_inv_w = shape > 1.0 ? rate / (shape - 1.0) : kInf;
    return m;
  }

  const double a = rate * lo;
  const double b = std::isinf(hi) ? kInf : rate * hi;

  const double p_lo = a == 0.0 ? 0.0 : regularized_gamma_p(shape, a);
  const double p_hi = std::isinf(b) ? 1.0 : regularized_gamma_p(shape, b);
  const double mass = p_hi - p_lo;
  if (!(mass > kTiny))
    throw Error("trunc_gamma_expectations: degenerate truncation");

  // Density peak location, used to rescale the quadrature kernel so it
  // cannot underflow across the truncation window.
  const double wstar =
      std::min(std::isinf(hi) ? std::numeric_limits<double>::max() : hi,
               std::max(lo, (shape - 1.0) / rate));
  const double log_peak = (shape - 1.0) * (wstar > 0.0 ? std::log(wstar) : 0.0) -
                          rate * wstar;
  auto kernel = [shape, rate, log_peak](double w) {
    const double lk = (shape - 1.0) * std::log(w) - rate * w - log_peak;
    return lk < -745.0 ? 0.0 : std::exp(lk);
  };
  auto expectation_by_quadrature = [&](auto&& g) {
    const QuadratureConfig cfg = tight_cfg();
    const double denom = adaptive_quadrature(kernel, lo, hi, cfg);
    const double numer = adaptive_quadrature(
        [&](double w) { return g(w) * kernel(w); }, lo, hi, cfg);
    return numer / denom;
  };

  TruncGammaMoments m;

  // Mean through the shape+1 identity, switching between P and Q
  // differences to whichever side is better conditioned.
  {
    const double q_lo = a == 0.0 ? 1.0 : regularized_gamma_q(shape, a);
    const double q_hi = std::isinf(b) ? 0.0 : regularized_gamma_q(shape, b);
    const double p1_lo = a == 0.0 ? 0.0 : regularized_gamma_p(shape + 1.0, a);
    const double p1_hi =
        std::isinf(b) ? 1.0 : regularized_gamma_p(shape + 1.0, b);
    const double q1_lo = a == 0.0 ? 1.0 : regularized_gamma_q(shape + 1.0, a);
    const double q1_hi =
        std::isinf(b) ? 0.0 : regularized_gamma_q(shape + 1.0, b);

    double num, den, num_scale, den_scale;
    if (p_lo + p_hi <= q_lo + q_hi) {
      num = p1_hi - p1_lo;
      den = p_hi - p_lo;
      num_scale = p1_hi;
      den_scale = p_hi;
    } else {
      num = q1_lo - q1_hi;
      den = q_lo - q_hi;
      num_scale = q1_lo;
      den_scale = q_lo;
    }
    const bool ill_conditioned = den < 1e-7 * den_scale ||
                                 num < 1e-7 * num_scale || num <= 0.0 ||
                                 den <= 0.0;
    m.mean_w = ill_conditioned
                   ? expectation_by_quadrature([](double w) { return w; })
                   : (shape / rate) * (num / den);
  }

  m.mean_log_w = expectation_by_quadrature(
      [](double w) { return std::log(w); });
  m.mean_inv_w = lo == 0.0 && shape <= 1.0
                     ? kInf
                     : expectation_by_quadrature(
                           [](double w) { return 1.0 / w; });
  return m;
}

}  // namespace alsm
