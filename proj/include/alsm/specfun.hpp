#ifndef ALSM_SPECFUN_HPP
#define ALSM_SPECFUN_HPP

#include "alsm/quadrature.hpp"

namespace alsm {

// Upper incomplete gamma Gamma(s,x) = int_x^inf t^(s-1) e^(-t) dt.
// s may be <= 0 provided x > 0; that case descends the recurrence
// Gamma(s,x) = [Gamma(s+1,x) - x^s e^(-x)] / s from a positive seed.
double upper_incomplete_gamma(double s, double x);

// e^x * Gamma(s,x), s > 0. Stays representable for large x where the
// unscaled value underflows.
double upper_incomplete_gamma_scaled(double s, double x);

// Lower incomplete gamma gamma(s,x) = Gamma(s) - Gamma(s,x), s > 0.
double lower_incomplete_gamma(double s, double x);

// Regularized Q(s,x) = Gamma(s,x)/Gamma(s) and P(s,x) = 1 - Q(s,x).
// The chi-square survival function at t with k dof is Q(k/2, t/2).
double regularized_gamma_q(double s, double x);
double regularized_gamma_p(double s, double x);

// log P(s,x), stable when P underflows (far left tail, large s).
double log_regularized_gamma_p(double s, double x);

// Digamma psi(x), x > 0.
double digamma(double x);

// Modified Bessel function of the third kind K_nu(x), x > 0; symmetric
// in nu. Half-integer orders use the closed forms plus the three-term
// recurrence; other orders integrate the cosh representation. Throws
// std::overflow_error when the value exceeds double range (x near 0
// with large |nu|).
double bessel_k(double nu, double x);

// e^x * K_nu(x).
double bessel_k_scaled(double nu, double x);

// Misra function phi_m(z) = int_1^inf t^m e^(-z t) dt
//                         = z^-(m+1) Gamma(m+1, z), integer m >= 0.
double misra_phi(int m, double z);

// Generalized exponential integral E_nu(z) = int_1^inf t^-nu e^(-z t) dt
// for real nu, z > 0.
double gen_exp_integral(double nu, double z);

// e^z * E_nu(z).
double gen_exp_integral_scaled(double nu, double z);

namespace detail {
// Sum S such that P(s,x) = exp(s log x - x - lgamma(s+1)) * S,
// converging for x < s+1. Lets callers assemble ratios like
// gamma(s,x)/x^s without forming the cancelling powers.
double lower_gamma_series_sum(double s, double x);
}  // namespace detail

struct TruncGammaMoments {
  double mean_w;
  double mean_log_w;
  double mean_inv_w;
};

// Posterior expectations E(W), E(log W), E(1/W) of a gamma(shape, rate)
// variable restricted to (lo, hi); hi may be +inf. The mean uses
// incomplete-gamma ratios (quadrature fallback when the tail difference
// cancels); the log and inverse moments use adaptive quadrature except
// in the untruncated case, where the closed forms apply. Throws when
// the truncated mass is below 1e-300.
TruncGammaMoments trunc_gamma_expectations(double shape, double rate,
                                           double lo, double hi);

}  // namespace alsm

#endif
