#ifndef ALSM_ALD_HPP
#define ALSM_ALD_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace alsm {

// Asymmetric Laplace parameters: location mu, scale beta > 0,
// asymmetry kappa > 0.
struct ALParams {
  double mu = 0.0;
  double beta = 1.0;
  double kappa = 1.0;

  void validate() const;
};

struct ALMoments {
  double mean;
  double variance;
  double skewness;
  double kurtosis;  // raw (non-excess)
};

// Standardized discrepancy from the mode:
// (kappa/beta)(x-mu) for x >= mu, (mu-x)/(kappa beta) otherwise.
double delta(double x, const ALParams& p);

double al_pdf(double x, const ALParams& p);
double al_logpdf(double x, const ALParams& p);

ALMoments al_moments(const ALParams& p);

// n draws via mu + beta (E1/kappa - kappa E2), E1, E2 iid standard
// exponentials.
std::vector<double> al_sample(const ALParams& p, std::size_t n,
                              std::uint64_t seed);

struct ALFit {
  ALParams params;
  double loglik;
};

// Maximum likelihood through the order-statistic profile scan with
// unit weights. Throws DegenerateSupportError when the profile
// optimizer lands on the smallest or largest order statistic.
ALFit al_fit(std::span<const double> data);

}  // namespace alsm

#endif
