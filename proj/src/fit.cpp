#include "alsm/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "alsm/errors.hpp"
#include "alsm/parallel.hpp"
#include "alsm/specfun.hpp"

namespace alsm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pareto fits are confined to theta > 2: below that the posterior mean
// E(W | x) diverges as x approaches the current mode, so the weighted
// M-step is undefined.
constexpr double kParetoThetaFloor = 2.0 + 1e-6;

double clamp(double x, double lo, double hi) {
  return std::min(hi, std::max(lo, x));
}

struct SortedData {
  std::vector<double> x;            // ascending
  std::vector<std::size_t> order;   // original index of x[j]
};

SortedData sort_data(std::span<const double> data) {
  SortedData s;
  s.order.resize(data.size());
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::sort(s.order.begin(), s.order.end(),
            [&](std::size_t i, std::size_t j) { return data[i] < data[j]; });
  s.x.resize(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) s.x[j] = data[s.order[j]];
  return s;
}

// Core of maximize_q1 on pre-sorted data; weights aligned with xs.
Q1Solution maximize_q1_sorted(const std::vector<double>& xs,
                              const std::vector<double>& ws) {
  const std::size_t n = xs.size();
  if (n < 3) throw std::invalid_argument("maximize_q1: need n >= 3");
  if (xs.front() == xs.back())
    throw std::invalid_argument("maximize_q1: need at least 2 distinct values");

  std::vector<double> sw(n + 1, 0.0), swx(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ws[i] > 0.0) || !std::isfinite(ws[i]))
      throw std::invalid_argument("maximize_q1: weights must be positive");
    sw[i + 1] = sw[i] + ws[i];
    swx[i + 1] = swx[i] + ws[i] * xs[i];
  }
  const double nn = static_cast<double>(n);

  double best = -kInf;
  std::size_t best_j = 0;
  bool best_interior = false;
  double best_a = 0.0, best_b = 0.0;

  for (std::size_t j = 0; j < n; ++j) {
    const double mu = xs[j];
    const double b = (mu * sw[j + 1] - swx[j + 1]) / nn;
    const double a = ((swx[n] - swx[j + 1]) - mu * (sw[n] - sw[j + 1])) / nn;
    const bool interior = j > 0 && j + 1 < n && a > 0.0 && b > 0.0;
    double obj;
    if (interior) {
      // Profile Q1 value: -2 log(sqrt(a) + sqrt(b)) - 1
      obj = -2.0 * std::log(std::sqrt(a) + std::sqrt(b)) - 1.0;
    } else if (a > 0.0 && b <= 0.0) {
      obj = -std::log(a) - 1.0;  // kappa -> 0 supremum, not attained
    } else if (b > 0.0 && a <= 0.0) {
      obj = -std::log(b) - 1.0;  // kappa -> inf supremum, not attained
    } else {
      continue;
    }
    if (obj > best) {
      best = obj;
      best_j = j;
      best_interior = interior;
      best_a = a;
      best_b = b;
    }
  }

  if (!best_interior)
    throw DegenerateSupportError(
        "maximize_q1: profile optimizer at order statistic " +
        std::to_string(best_j + 1) + " of " + std::to_string(n) +
        "; scale/asymmetry updates do not exist");

  Q1Solution s;
  s.mu = xs[best_j];
  s.kappa = std::pow(best_b / best_a, 0.25);
  s.beta = s.kappa * best_a + best_b / s.kappa;
  return s;
}

// --- scalar maximization -------------------------------------------------

// Coarse grid plus golden-section refinement of a unimodal objective
// on [lo, hi]. Returns the argmax among all probed points.
double grid_golden_max(const std::function<double(double)>& f, double lo,
                       double hi, int grid_points = 60) {
  double best_x = lo, best_f = -kInf;
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = lo + (hi - lo) * i / (grid_points - 1.0);
  int best_i = -1;
  for (int i = 0; i < grid_points; ++i) {
    const double fx = f(grid[i]);
    if (std::isfinite(fx) && fx > best_f) {
      best_f = fx;
      best_x = grid[i];
      best_i = i;
    }
  }
  if (best_i < 0)
    throw BracketFailureError("scalar search: objective non-finite on grid");

  double a = grid[std::max(0, best_i - 1)];
  double b = grid[std::min(grid_points - 1, best_i + 1)];
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 120 && b - a > 1e-12 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = f(mid);
  if (fmid > best_f) return mid;
  return best_x;
}

// --- per-family E-step pieces --------------------------------------------

QuadratureConfig estep_quad_cfg() { return {1e-13, 1e-11, 400}; }

// E(W | x) and E(log W | x) for the PowerFunction posterior, a
// right-truncated gamma(theta+1, delta) on (0, 1).
void pf_estep_point(double theta, double d, double& w, double& logw) {
  if (d * (theta + 3.0) < 1e-6) {
    // delta -> 0 limit: density w^theta on (0,1), first-order correction
    w = (theta + 1.0) / (theta + 2.0) -
        d * (theta + 1.0) / ((theta + 2.0) * (theta + 2.0) * (theta + 3.0));
    logw = -1.0 / (theta + 1.0) - d / ((theta + 2.0) * (theta + 2.0));
    return;
  }
  w = std::exp(std::log(theta + 1.0) + log_regularized_gamma_p(theta + 2.0, d) -
               std::log(d) - log_regularized_gamma_p(theta + 1.0, d));
  // log moment by quadrature of the scaled kernel
  const double wstar = std::min(1.0, theta / d);
  const double lpeak = theta * std::log(wstar) - d * wstar;
  auto kern = [theta, d, lpeak](double t) {
    const double e = theta * std::log(t) - d * t - lpeak;
    return e < -745.0 ? 0.0 : std::exp(e);
  };
  const auto cfg = estep_quad_cfg();
  const double den = adaptive_quadrature(kern, 0.0, 1.0, cfg);
  const double num = adaptive_quadrature(
      [&](double t) { return std::log(t) * kern(t); }, 0.0, 1.0, cfg);
  logw = num / den;
}

// E(W | x) and E(log W | x) for the Pareto posterior, proportional to
// w^-theta e^(-w delta) on (1, inf). Requires theta > 2 at delta = 0.
void pareto_estep_point(double theta, double d, std::size_t i, double& w,
                        double& logw) {
  if (d < 1e-12) {
    if (theta <= 2.0)
      throw UnderflowError("pareto E-step: posterior mean diverges at the mode",
                           i);
    w = (theta - 1.0) / (theta - 2.0);
    logw = 1.0 / (theta - 1.0);
    return;
  }
  const double denom = gen_exp_integral_scaled(theta, d);
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw UnderflowError("pareto E-step: posterior normalizer vanished", i);
  w = gen_exp_integral_scaled(theta - 1.0, d) / denom;
  const auto cfg = estep_quad_cfg();
  const double num = adaptive_quadrature(
      [theta, d](double u) {
        const double e = -theta * std::log1p(u) - d * u;
        return e < -745.0 ? 0.0 : std::log1p(u) * std::exp(e);
      },
      0.0, kInf, cfg);
  logw = num / denom;
}

// Ihat_k(z) = gamma(k+1, z) / z^(k+1); series below z = 1 so the
// UniformTail weight ratio stays cancellation-free for any delta.
double ihat(int k, double z) {
  if (z < 1.0) {
    double term = 1.0 / (k + 1.0);
    double sum = term;
    double zj = 1.0;
    double jfact = 1.0;
    for (int j = 1; j <= 60; ++j) {
      zj *= -z;
      jfact *= j;
      term = zj / (jfact * (k + 1.0 + j));
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum;
  }
  return lower_incomplete_gamma(k + 1.0, z) / std::pow(z, k + 1.0);
}

// E(W | x) for the UniformTail posterior, a doubly truncated
// gamma(2, delta) on (1-theta, 1), written with the shifted moments
// Ihat so no incomplete-gamma differences are formed.
double uniform_estep_point(double theta, double d) {
  const double a = 1.0 - theta;
  const double z = theta * std::max(d, 1e-300);
  const double i0 = ihat(0, z);
  const double i1 = ihat(1, z);
  const double i2 = ihat(2, z);
  // Both sides carry e^(-a delta) theta; it cancels in the ratio.
  return (a * a * i0 + 2.0 * a * theta * i1 + theta * theta * i2) /
         (a * i0 + theta * i1);
}

// --- Q2 as a function of theta given sufficient statistics ---------------

struct SuffStats {
  double n = 0.0;
  double sum_w = 0.0;
  double sum_log_w = 0.0;
  double sum_inv_w = 0.0;
};

double q2_value(Family f, double theta, const SuffStats& s) {
  switch (f) {
    case Family::ShiftedExp:
      return s.n * std::log(theta) - theta * (s.sum_w - s.n);
    case Family::UnimodalGamma:
      return (s.sum_log_w - s.sum_w) / theta -
             s.n * (1.0 / theta + 1.0) * std::log(theta) -
             s.n * std::lgamma(1.0 / theta + 1.0);
    case Family::GammaApp:
      return 0.5 * theta * (s.sum_log_w - s.sum_w) +
             0.5 * s.n * theta * std::log(0.5 * theta) -
             s.n * std::lgamma(0.5 * theta);
    case Family::InverseGaussian: {
      const double root = std::sqrt(1.0 + 3.0 * theta);
      return 0.5 * s.n * std::log((1.0 + 3.0 * theta) /
                                  (2.0 * 3.141592653589793 * theta)) +
             (2.0 * s.n * root - s.sum_w - (1.0 + 3.0 * theta) * s.sum_inv_w) /
                 (2.0 * theta);
    }
    case Family::PowerFunction:
      return s.n * std::log(theta) + (theta - 1.0) * s.sum_log_w;
    case Family::Pareto:
      return s.n * std::log(theta) - (theta + 1.0) * s.sum_log_w;
    default:
      throw std::logic_error("q2_value: unsupported family");
  }
}

SuffStats make_stats(const EStepWeights& w) {
  SuffStats s;
  s.n = static_cast<double>(w.w.size());
  for (double v : w.w) s.sum_w += v;
  for (double v : w.log_w) s.sum_log_w += v;
  for (double v : w.inv_w) s.sum_inv_w += v;
  return s;
}

double numeric_theta_argmax(Family f, const SuffStats& s, double cur,
                            const FitConfig& cfg) {
  auto obj = [&](double log_theta) {
    return q2_value(f, std::exp(log_theta), s);
  };
  const double lx = grid_golden_max(obj, std::log(cfg.theta_lo),
                                    std::log(cfg.theta_hi));
  double cand = std::exp(lx);
  // Keep the previous theta unless the candidate genuinely improves Q2.
  if (q2_value(f, cand, s) < q2_value(f, cur, s)) cand = cur;
  return cand;
}

}  // namespace

Q1Solution maximize_q1(std::span<const double> data,
                       std::span<const double> weights) {
  if (data.size() != weights.size())
    throw std::invalid_argument("maximize_q1: data/weights size mismatch");
  const SortedData s = sort_data(data);
  std::vector<double> ws(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) ws[j] = weights[s.order[j]];
  return maximize_q1_sorted(s.x, ws);
}

EStepWeights estep(const ALSMParams& p, std::span<const double> data) {
  p.validate();
  const std::size_t n = data.size();
  const double t = p.mixing.theta1;
  EStepWeights out;
  out.w.resize(n);

  switch (p.mixing.family) {
    case Family::TwoPoint: {
      out.v.resize(n);
      const double t2 = p.mixing.theta2;
      for_each_index(n, [&](std::size_t i) {
        const double v = tp_posterior_good(data[i], p);
        out.v[i] = v;
        out.w[i] = v + (1.0 - v) / t2;
      });
      break;
    }
    case Family::ShiftedExp:
      for_each_index(n, [&](std::size_t i) {
        const double z = delta(data[i], p.al) + t;
        out.w[i] = (z * z + 2.0 * z + 2.0) / (z * (z + 1.0));
      });
      break;
    case Family::UnimodalGamma: {
      out.log_w.resize(n);
      const double shape = 1.0 / t + 2.0;
      const double psi_shape = digamma(shape);
      for_each_index(n, [&](std::size_t i) {
        const double rate = delta(data[i], p.al) + 1.0 / t;
        out.w[i] = shape / rate;
        out.log_w[i] = psi_shape - std::log(rate);
      });
      break;
    }
    case Family::GammaApp: {
      out.log_w.resize(n);
      const double shape = 0.5 * t + 1.0;
      const double psi_shape = digamma(shape);
      for_each_index(n, [&](std::size_t i) {
        const double rate = delta(data[i], p.al) + 0.5 * t;
        out.w[i] = shape / rate;
        out.log_w[i] = psi_shape - std::log(rate);
      });
      break;
    }
    case Family::InverseGaussian: {
      out.inv_w.resize(n);
      const double root = std::sqrt(1.0 + 3.0 * t);
      for_each_index(n, [&](std::size_t i) {
        const double u = 1.0 + 2.0 * t * delta(data[i], p.al);
        out.w[i] = root / std::sqrt(u) + t / u;
        out.inv_w[i] = std::sqrt(u) / root;
      });
      break;
    }
    case Family::PowerFunction: {
      out.log_w.resize(n);
      for_each_index(n, [&](std::size_t i) {
        pf_estep_point(t, delta(data[i], p.al), out.w[i], out.log_w[i]);
      });
      break;
    }
    case Family::Pareto: {
      out.log_w.resize(n);
      for_each_index(n, [&](std::size_t i) {
        pareto_estep_point(t, delta(data[i], p.al), i, out.w[i],
                           out.log_w[i]);
      });
      break;
    }
    case Family::UniformTail:
      for_each_index(n, [&](std::size_t i) {
        out.w[i] = uniform_estep_point(t, delta(data[i], p.al));
      });
      break;
  }
  return out;
}

MixingLaw mstep_theta(const MixingLaw& current, const EStepWeights& weights,
                      std::span<const double> data, const ALParams& al_new,
                      const FitConfig& cfg) {
  const SuffStats s = make_stats(weights);
  const double n = s.n;
  switch (current.family) {
    case Family::ShiftedExp: {
      const double denom = s.sum_w - n;
      double cand = denom > 0.0 ? n / denom : cfg.theta_hi;
      cand = clamp(cand, cfg.theta_lo, cfg.theta_hi);
      if (q2_value(Family::ShiftedExp, cand, s) <
          q2_value(Family::ShiftedExp, current.theta1, s))
        cand = current.theta1;
      return MixingLaw::shifted_exp(cand);
    }
    case Family::PowerFunction: {
      double cand = s.sum_log_w < 0.0 ? -n / s.sum_log_w : cfg.theta_hi;
      cand = clamp(cand, cfg.theta_lo, cfg.theta_hi);
      if (q2_value(Family::PowerFunction, cand, s) <
          q2_value(Family::PowerFunction, current.theta1, s))
        cand = current.theta1;
      return MixingLaw::power_function(cand);
    }
    case Family::Pareto: {
      double cand = s.sum_log_w > 0.0 ? n / s.sum_log_w : cfg.theta_hi;
      cand = clamp(cand, kParetoThetaFloor, cfg.theta_hi);
      if (q2_value(Family::Pareto, cand, s) <
          q2_value(Family::Pareto, current.theta1, s))
        cand = current.theta1;
      return MixingLaw::pareto(cand);
    }
    case Family::UnimodalGamma:
      return MixingLaw::unimodal_gamma(
          numeric_theta_argmax(Family::UnimodalGamma, s, current.theta1, cfg));
    case Family::GammaApp:
      return MixingLaw::gamma_app(
          numeric_theta_argmax(Family::GammaApp, s, current.theta1, cfg));
    case Family::InverseGaussian:
      return MixingLaw::inverse_gaussian(numeric_theta_argmax(
          Family::InverseGaussian, s, current.theta1, cfg));
    case Family::TwoPoint: {
      // CM updates: theta1 from the mean posterior, theta2 from the
      // weighted one-sided distances at the refreshed (mu,beta,kappa).
      double vbar = 0.0, vrest = 0.0, dist = 0.0;
      for (std::size_t i = 0; i < weights.v.size(); ++i) {
        vbar += weights.v[i];
        const double one_minus = 1.0 - weights.v[i];
        vrest += one_minus;
        dist += one_minus * delta(data[i], al_new) * al_new.beta;
      }
      const double t1 =
          clamp(vbar / static_cast<double>(weights.v.size()), 0.5 + 1e-9,
                1.0 - 1e-9);
      double t2 = current.theta2;
      if (vrest > 1e-12) t2 = dist / (al_new.beta * vrest);
      t2 = clamp(t2, 1.0 + 1e-9, cfg.theta_hi);
      return MixingLaw::two_point(t1, t2);
    }
    case Family::UniformTail: {
      // ECME: maximize the observed log-likelihood over theta with the
      // (mu, beta, kappa) block held at its refreshed value.
      std::vector<double> ds(data.size());
      for (std::size_t i = 0; i < data.size(); ++i)
        ds[i] = delta(data[i], al_new);
      auto obs = [&](double theta) {
        MixingLaw m{Family::UniformTail, theta, 0.0};
        return sum_over_index(ds.size(), [&](std::size_t i) {
          return log_f_delta(m, ds[i]);
        });
      };
      const double lo = 1e-9, hi = 1.0 - 1e-9;
      double cand = grid_golden_max(obs, lo, hi, 48);
      if (obs(cand) < obs(current.theta1)) cand = current.theta1;
      return MixingLaw::uniform_tail(cand);
    }
  }
  throw std::logic_error("mstep_theta: unsupported family");
}

ALSMParams default_init(Family family, std::span<const double> data) {
  std::vector<double> tmp(data.begin(), data.end());
  const std::size_t n = tmp.size();
  std::nth_element(tmp.begin(), tmp.begin() + n / 2, tmp.end());
  double med = tmp[n / 2];
  if (n % 2 == 0) {
    const double hi = med;
    std::nth_element(tmp.begin(), tmp.begin() + (n / 2 - 1), tmp.end());
    med = 0.5 * (tmp[n / 2 - 1] + hi);
  }
  double mad = 0.0;
  for (double x : data) mad += std::abs(x - med);
  mad /= static_cast<double>(n);
  if (!(mad > 0.0)) mad = 1.0;

  MixingLaw mixing = MixingLaw::shifted_exp(5.0);
  switch (family) {
    case Family::TwoPoint: mixing = MixingLaw::two_point(0.9, 3.0); break;
    case Family::ShiftedExp: mixing = MixingLaw::shifted_exp(5.0); break;
    case Family::UnimodalGamma: mixing = MixingLaw::unimodal_gamma(0.2); break;
    case Family::InverseGaussian:
      mixing = MixingLaw::inverse_gaussian(0.5);
      break;
    case Family::PowerFunction: mixing = MixingLaw::power_function(10.0); break;
    case Family::Pareto: mixing = MixingLaw::pareto(10.0); break;
    case Family::UniformTail: mixing = MixingLaw::uniform_tail(0.5); break;
    case Family::GammaApp: mixing = MixingLaw::gamma_app(20.0); break;
  }
  return {{med, mad, 1.0}, mixing};
}

namespace {

// --- method of moments ----------------------------------------------------

struct SampleStats {
  double mean, sd, skew, kurt;
};

SampleStats sample_stats(std::span<const double> data) {
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double x : data) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : data) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double s2 = m2 / (n - 1.0);
  const double sd = std::sqrt(s2);
  SampleStats s;
  s.mean = mean;
  s.sd = sd;
  s.skew = m3 / (n * sd * sd * sd);
  s.kurt = m4 / (n * s2 * s2);
  return s;
}

// theta parameterizations keeping the solver inside the region where
// skewness and kurtosis exist.
double theta_from_unconstrained(Family f, double u) {
  switch (f) {
    case Family::UnimodalGamma: return (1.0 / 3.0) / (1.0 + std::exp(-u));
    case Family::UniformTail: return 1.0 / (1.0 + std::exp(-u));
    case Family::GammaApp: return 8.0 + std::exp(u);
    case Family::PowerFunction: return 4.0 + std::exp(u);
    default: return std::exp(u);
  }
}

double unconstrained_from_theta(Family f, double t) {
  switch (f) {
    case Family::UnimodalGamma: {
      const double p = t / (1.0 / 3.0);
      return std::log(p / (1.0 - p));
    }
    case Family::UniformTail: return std::log(t / (1.0 - t));
    case Family::GammaApp: return std::log(t - 8.0);
    case Family::PowerFunction: return std::log(t - 4.0);
    default: return std::log(t);
  }
}

// Minimal Nelder-Mead on R^2.
std::array<double, 2> nelder_mead2(
    const std::function<double(const std::array<double, 2>&)>& f,
    std::array<double, 2> start, int max_iter, double* fbest) {
  std::array<std::array<double, 2>, 3> pts{
      start, {start[0] + 0.5, start[1]}, {start[0], start[1] + 0.5}};
  std::array<double, 3> fv{f(pts[0]), f(pts[1]), f(pts[2])};
  for (int it = 0; it < max_iter; ++it) {
    // order best..worst
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<std::array<double, 2>, 3> p2{pts[idx[0]], pts[idx[1]],
                                            pts[idx[2]]};
    std::array<double, 3> f2{fv[idx[0]], fv[idx[1]], fv[idx[2]]};
    pts = p2;
    fv = f2;
    if (std::abs(fv[2] - fv[0]) < 1e-15 * (1.0 + std::abs(fv[0]))) break;
    const std::array<double, 2> centroid{0.5 * (pts[0][0] + pts[1][0]),
                                         0.5 * (pts[0][1] + pts[1][1])};
    auto along = [&](double c) {
      return std::array<double, 2>{centroid[0] + c * (centroid[0] - pts[2][0]),
                                   centroid[1] + c * (centroid[1] - pts[2][1])};
    };
    const auto xr = along(1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const auto xe = along(2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[2] = xe;
        fv[2] = fe;
      } else {
        pts[2] = xr;
        fv[2] = fr;
      }
    } else if (fr < fv[1]) {
      pts[2] = xr;
      fv[2] = fr;
    } else {
      const auto xc = along(-0.5);
      const double fc = f(xc);
      if (fc < fv[2]) {
        pts[2] = xc;
        fv[2] = fc;
      } else {
        for (int k = 1; k < 3; ++k) {
          pts[k] = {0.5 * (pts[k][0] + pts[0][0]),
                    0.5 * (pts[k][1] + pts[0][1])};
          fv[k] = f(pts[k]);
        }
      }
    }
  }
  int b = fv[0] < fv[1] ? (fv[0] < fv[2] ? 0 : 2) : (fv[1] < fv[2] ? 1 : 2);
  if (fbest) *fbest = fv[b];
  return pts[b];
}

std::vector<double> mm_theta_starts(Family f) {
  switch (f) {
    case Family::ShiftedExp: return {0.5, 2.0, 10.0};
    case Family::UnimodalGamma: return {0.05, 0.15, 0.28};
    case Family::InverseGaussian: return {0.1, 0.5, 2.0};
    case Family::PowerFunction: return {4.5, 6.0, 12.0};
    case Family::Pareto: return {0.5, 2.0, 8.0};
    case Family::UniformTail: return {0.3, 0.6, 0.9};
    case Family::GammaApp: return {8.5, 10.0, 16.0};
    default: return {};
  }
}

}  // namespace

InitGuess method_of_moments_init(Family family, std::span<const double> data) {
  if (data.size() < 5)
    throw std::invalid_argument("method_of_moments_init: need n >= 5");
  const ALSMParams fallback = default_init(family, data);
  if (family == Family::TwoPoint) return {fallback, false};

  const SampleStats ss = sample_stats(data);
  if (!std::isfinite(ss.kurt) || !(ss.sd > 0.0)) return {fallback, false};

  auto shape_resid = [&](const std::array<double, 2>& u) {
    const double kappa = std::exp(u[0]);
    const double theta = theta_from_unconstrained(family, u[1]);
    MixingLaw m{family, theta, 0.0};
    const Moments mo = alsm_moments({{0.0, 1.0, kappa}, m});
    if (!mo.skewness || !mo.kurtosis) return 1e100;
    const double ds = *mo.skewness - ss.skew;
    const double dk = *mo.kurtosis - ss.kurt;
    return ds * ds + dk * dk;
  };

  double best_f = kInf;
  std::array<double, 2> best_u{0.0, 0.0};
  for (double k0 : {0.6, 1.0, 1.6}) {
    for (double t0 : mm_theta_starts(family)) {
      double fb;
      const auto u = nelder_mead2(
          shape_resid, {std::log(k0), unconstrained_from_theta(family, t0)},
          300, &fb);
      if (fb < best_f) {
        best_f = fb;
        best_u = u;
      }
    }
  }
  if (!(best_f < 1e-10 * (1.0 + ss.kurt * ss.kurt))) return {fallback, false};

  const double kappa = std::exp(best_u[0]);
  const double theta = theta_from_unconstrained(family, best_u[1]);
  MixingLaw mixing{family, theta, 0.0};
  mixing.validate();
  const auto e1 = inv_w_moment_opt(mixing, 1);
  const auto e2 = inv_w_moment_opt(mixing, 2);
  if (!e1 || !e2) return {fallback, false};
  const double k2 = kappa * kappa;
  const double k4 = k2 * k2;
  const double k6 = k4 * k2;
  const double denom =
      2.0 * (1.0 + k6) * (*e2) - (1.0 - k4) * (1.0 - k2) * (*e1) * (*e1);
  if (!(denom > 0.0)) return {fallback, false};
  const double beta =
      std::sqrt(ss.sd * ss.sd * k2 * (1.0 + k2) / denom);
  const double mu = ss.mean - beta * (1.0 / kappa - kappa) * (*e1);
  ALSMParams p{{mu, beta, kappa}, mixing};
  p.validate();
  return {p, true};
}

FitResult fit(Family family, std::span<const double> data,
              const FitConfig& cfg) {
  if (data.size() < 5) throw std::invalid_argument("fit: need n >= 5");
  for (double x : data)
    if (!std::isfinite(x)) throw std::invalid_argument("fit: data must be finite");

  ALSMParams p = default_init(family, data);
  if (cfg.init == FitConfig::Init::Moments) {
    p = method_of_moments_init(family, data).params;
  } else if (cfg.init == FitConfig::Init::Fixed) {
    if (!cfg.fixed_init)
      throw std::invalid_argument("fit: Init::Fixed needs fixed_init");
    p = *cfg.fixed_init;
    p.validate();
    if (p.mixing.family != family)
      throw std::invalid_argument("fit: fixed_init family mismatch");
  }

  const SortedData sorted = sort_data(data);
  std::vector<double> ws_sorted(data.size());

  FitResult res;
  res.loglik_trace.reserve(64);
  double ll = alsm_loglik(data, p);
  res.loglik_trace.push_back(ll);
  res.converged = false;

  int iter = 0;
  while (iter < cfg.max_iter) {
    ++iter;
    const EStepWeights w = estep(p, data);
    for (std::size_t j = 0; j < data.size(); ++j)
      ws_sorted[j] = w.w[sorted.order[j]];
    const Q1Solution q1 = maximize_q1_sorted(sorted.x, ws_sorted);
    const ALParams al_new{q1.mu, q1.beta, q1.kappa};
    const MixingLaw mixing_new = mstep_theta(p.mixing, w, data, al_new, cfg);
    p = ALSMParams{al_new, mixing_new};

    const double ll_new = alsm_loglik(data, p);
    res.loglik_trace.push_back(ll_new);
    const double rel = std::abs(ll_new - ll) / (1.0 + std::abs(ll_new));
    ll = ll_new;
    if (rel < cfg.loglik_rel_tol) {
      res.converged = true;
      break;
    }
  }

  res.al = p.al;
  res.mixing = p.mixing;
  res.loglik = ll;
  res.n_iter = iter;
  return res;
}

FitResult fit_al(std::span<const double> data, const FitConfig&) {
  const ALFit f = al_fit(data);
  FitResult res;
  res.al = f.params;
  res.mixing = std::nullopt;
  res.loglik = f.loglik;
  res.n_iter = 1;
  res.converged = true;
  res.loglik_trace = {f.loglik};
  return res;
}

}  // namespace alsm
