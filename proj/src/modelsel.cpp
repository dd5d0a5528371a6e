#include "alsm/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "alsm/errors.hpp"
#include "alsm/specfun.hpp"

namespace alsm {
namespace {

double al_proximal_theta1(Family f) {
  switch (f) {
    case Family::TwoPoint: return 0.999;
    case Family::ShiftedExp: return 1e3;
    case Family::UnimodalGamma: return 1e-3;
    case Family::InverseGaussian: return 1e-3;
    case Family::PowerFunction: return 1e3;
    case Family::Pareto: return 1e3;
    case Family::UniformTail: return 1e-3;
    case Family::GammaApp: return 1e3;
  }
  return 1.0;
}

ALSMParams al_proximal_init(Family f, const ALParams& al) {
  MixingLaw m{f, al_proximal_theta1(f),
              f == Family::TwoPoint ? 1.01 : 0.0};
  m.validate();
  return {al, m};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void assign_ranks(std::vector<ModelScore>& rows, double ModelScore::*crit,
                  std::optional<int> ModelScore::*rank) {
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].error.empty()) ok.push_back(i);
  std::sort(ok.begin(), ok.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a].*crit != rows[b].*crit) return rows[a].*crit < rows[b].*crit;
    return rows[a].model < rows[b].model;  // permutation-stable tie break
  });
  for (std::size_t r = 0; r < ok.size(); ++r)
    rows[ok[r]].*rank = static_cast<int>(r + 1);
}

}  // namespace

std::pair<double, double> lr_test(double null_loglik, double alt_loglik,
                                  int df) {
  if (df < 1) throw std::invalid_argument("lr_test: df must be >= 1");
  if (alt_loglik < null_loglik - 1e-8)
    throw NestingViolationError(
        "lr_test: alternative log-likelihood " + format_double(alt_loglik) +
        " below null " + format_double(null_loglik));
  const double stat = std::max(0.0, -2.0 * (null_loglik - alt_loglik));
  const double pvalue = regularized_gamma_q(0.5 * df, 0.5 * stat);
  return {stat, pvalue};
}

BaselineFit baseline_fit(const std::string& tag,
                         std::span<const double> data) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("baseline_fit: need n >= 2");
  BaselineFit out;
  if (tag == "normal") {
    double mean = 0.0;
    for (double x : data) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : data) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);  // ML variance
    out.params = {mean, var};
    out.loglik = -0.5 * static_cast<double>(n) *
                 (std::log(2.0 * 3.141592653589793 * var) + 1.0);
    return out;
  }
  if (tag == "laplace") {
    std::vector<double> tmp(data.begin(), data.end());
    std::nth_element(tmp.begin(), tmp.begin() + n / 2, tmp.end());
    double med = tmp[n / 2];
    if (n % 2 == 0) {
      const double hi = med;
      std::nth_element(tmp.begin(), tmp.begin() + (n / 2 - 1), tmp.end());
      med = 0.5 * (tmp[n / 2 - 1] + hi);
    }
    double scale = 0.0;
    for (double x : data) scale += std::abs(x - med);
    scale /= static_cast<double>(n);
    out.params = {med, scale};
    out.loglik = -static_cast<double>(n) * (std::log(2.0 * scale) + 1.0);
    return out;
  }
  throw std::invalid_argument("baseline_fit: unknown tag " + tag);
}

std::vector<std::string> default_model_set() {
  std::vector<std::string> tags{"al"};
  for (Family f : kAllFamilies) tags.push_back(family_tag(f));
  tags.push_back("normal");
  tags.push_back("laplace");
  return tags;
}

std::vector<ModelScore> compare(std::span<const double> data,
                                const std::vector<std::string>& models,
                                const FitConfig& cfg) {
  if (models.empty()) throw std::invalid_argument("compare: no models");
  const double n = static_cast<double>(data.size());
  const double log_n = std::log(n);

  // One shared AL fit for every LR test.
  std::optional<FitResult> al;
  std::string al_error;
  try {
    al = fit_al(data, cfg);
  } catch (const Error& e) {
    al_error = e.what();
  } catch (const std::exception& e) {
    al_error = e.what();
  }

  std::vector<ModelScore> rows;
  rows.reserve(models.size());
  for (const std::string& tag : models) {
    ModelScore row;
    row.model = tag;
    try {
      if (tag == "al") {
        if (!al) throw Error(al_error);
        row.k = 3;
        row.loglik = al->loglik;
        row.fit = *al;
      } else if (tag == "normal" || tag == "laplace") {
        const BaselineFit b = baseline_fit(tag, data);
        row.k = b.k;
        row.loglik = b.loglik;
      } else {
        const auto fam = family_from_tag(tag);
        if (!fam) throw std::invalid_argument("unknown model tag: " + tag);
        FitResult fr = fit(*fam, data, cfg);
        // Every family nests AL; when the fit lands below the shared AL
        // fit, restart from an AL-proximal point and keep the better.
        if (al && fr.loglik < al->loglik - 1e-8) {
          FitConfig cfg2 = cfg;
          cfg2.init = FitConfig::Init::Fixed;
          cfg2.fixed_init = al_proximal_init(*fam, al->al);
          const FitResult retry = fit(*fam, data, cfg2);
          if (retry.loglik > fr.loglik) fr = retry;
        }
        row.k = *fam == Family::TwoPoint ? 5 : 4;
        row.loglik = fr.loglik;
        row.fit = fr;
        if (al) {
          const int df = row.k - 3;
          const auto [stat, p] = lr_test(al->loglik, fr.loglik, df);
          row.lr_stat = stat;
          row.lr_df = df;
          row.lr_pvalue = p;
        }
      }
      row.aic = 2.0 * row.k - 2.0 * row.loglik;
      row.bic = row.k * log_n - 2.0 * row.loglik;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  assign_ranks(rows, &ModelScore::aic, &ModelScore::rank_aic);
  assign_ranks(rows, &ModelScore::bic, &ModelScore::rank_bic);
  return rows;
}

std::string comparison_csv(const std::vector<ModelScore>& rows) {
  std::ostringstream os;
  os << "model,k,loglik,aic,rank_aic,bic,rank_bic,lr_stat,lr_df,lr_pvalue\n";
  for (const ModelScore& r : rows) {
    os << r.model << ',';
    if (r.error.empty()) {
      os << r.k << ',' << format_double(r.loglik) << ','
         << format_double(r.aic) << ',';
      if (r.rank_aic) os << *r.rank_aic;
      os << ',' << format_double(r.bic) << ',';
      if (r.rank_bic) os << *r.rank_bic;
      os << ',';
      if (r.lr_stat) os << format_double(*r.lr_stat);
      os << ',';
      if (r.lr_df) os << *r.lr_df;
      os << ',';
      if (r.lr_pvalue) os << format_double(*r.lr_pvalue);
      os << '\n';
    } else {
      os << ",,,,,,,,\n";
    }
  }
  return os.str();
}

}  // namespace alsm
