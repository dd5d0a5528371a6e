#ifndef ALSM_MODELSEL_HPP
#define ALSM_MODELSEL_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alsm/fit.hpp"

namespace alsm {

struct ModelScore {
  std::string model;
  int k = 0;  // parameter count
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::optional<double> lr_stat;
  std::optional<int> lr_df;
  std::optional<double> lr_pvalue;
  std::optional<int> rank_aic;
  std::optional<int> rank_bic;
  std::optional<FitResult> fit;  // absent for baselines
  std::string error;             // non-empty when the fit failed
};

// Likelihood-ratio statistic and chi-square p-value (Wilks). Throws
// NestingViolationError when alt < null beyond a 1e-8 slack; smaller
// deficits clamp the statistic to zero.
std::pair<double, double> lr_test(double null_loglik, double alt_loglik,
                                  int df);

struct BaselineFit {
  std::vector<double> params;  // normal: {mean, ml_variance}; laplace: {median, scale}
  double loglik = 0.0;
  int k = 2;
};

// Closed-form ML fits of the simple baselines, tags "normal" and
// "laplace".
BaselineFit baseline_fit(const std::string& tag, std::span<const double> data);

// Fit every requested model, compute AIC/BIC, LR tests against a single
// shared AL fit for the nesting families, and dense ranks over the
// successful rows. Per-model failures are captured in the row. Tags:
// "al", "normal", "laplace", and the eight mixing-family tags.
std::vector<ModelScore> compare(std::span<const double> data,
                                const std::vector<std::string>& models,
                                const FitConfig& cfg = {});

std::vector<std::string> default_model_set();

// CSV rendering with the fixed column order
// model,k,loglik,aic,rank_aic,bic,rank_bic,lr_stat,lr_df,lr_pvalue.
std::string comparison_csv(const std::vector<ModelScore>& rows);

}  // namespace alsm

#endif
