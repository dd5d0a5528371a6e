#ifndef ALSM_FIT_HPP
#define ALSM_FIT_HPP

#include <optional>
#include <span>
#include <vector>

#include "alsm/alsm.hpp"

namespace alsm {

struct FitConfig {
  int max_iter = 1000;
  double loglik_rel_tol = 1e-8;

  enum class Init { Defaults, Moments, Fixed };
  Init init = Init::Defaults;
  std::optional<ALSMParams> fixed_init;

  // Search interval for the numeric theta updates (log scale). The
  // UniformTail theta is additionally confined to (0, 1).
  double theta_lo = 1e-6;
  double theta_hi = 1e6;
};

// Per-observation posterior expectations at the current parameters.
// Only the fields the model's M-step needs are populated.
struct EStepWeights {
  std::vector<double> w;      // E(W | x); for TwoPoint, v + (1-v)/theta2
  std::vector<double> log_w;  // E(log W | x)
  std::vector<double> inv_w;  // E(1/W | x), InverseGaussian only
  std::vector<double> v;      // reference-component posterior, TwoPoint only
};

struct Q1Solution {
  double mu;
  double beta;
  double kappa;
};

// Weighted maximizer of the shared (mu, beta, kappa) block: mu scans
// the order statistics of the profile objective, then
// kappa = (b/a)^(1/4) and beta = kappa a + b/kappa with the
// 1/n-normalized weighted one-sided sums a, b. Throws
// DegenerateSupportError when the profile optimizer is the smallest or
// largest order statistic.
Q1Solution maximize_q1(std::span<const double> data,
                       std::span<const double> weights);

EStepWeights estep(const ALSMParams& p, std::span<const double> data);

// Theta update given E-step weights. `al_new` carries the location/
// scale/asymmetry block already updated this iteration (used by the
// TwoPoint closed form and the UniformTail observed-likelihood step).
MixingLaw mstep_theta(const MixingLaw& current, const EStepWeights& weights,
                      std::span<const double> data, const ALParams& al_new,
                      const FitConfig& cfg = {});

struct FitResult {
  ALParams al;
  std::optional<MixingLaw> mixing;  // nullopt for the plain AL fit
  double loglik = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::vector<double> loglik_trace;

  std::string model_tag() const {
    return mixing ? family_tag(mixing->family) : "al";
  }
};

// EM (SE/UG/IG/PF/P/G), ECM (TwoPoint) or ECME (UniformTail) fit.
FitResult fit(Family family, std::span<const double> data,
              const FitConfig& cfg = {});

// Null-model fit sharing the FitResult shape.
FitResult fit_al(std::span<const double> data, const FitConfig& cfg = {});

struct InitGuess {
  ALSMParams params;
  bool from_moments;  // false when the solver failed and defaults apply
};

// Method-of-moments initializer: solve the skewness/kurtosis system
// for (kappa, theta) from a small multi-start grid, then beta from the
// variance equation and mu from the mean equation. Falls back to
// default_init on failure.
InitGuess method_of_moments_init(Family family, std::span<const double> data);

// Median/mean-absolute-deviation start with a mildly mixed theta.
ALSMParams default_init(Family family, std::span<const double> data);

}  // namespace alsm

#endif
