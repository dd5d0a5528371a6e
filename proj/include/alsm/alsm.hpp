#ifndef ALSM_ALSM_HPP
#define ALSM_ALSM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alsm/ald.hpp"
#include "alsm/quadrature.hpp"

namespace alsm {

// The eight mixing laws for W. Each embeds the plain AL as a limit of
// its tailedness parameter.
enum class Family {
  TwoPoint,         // W = 1 w.p. theta1, 1/theta2 w.p. 1-theta1
  ShiftedExp,       // rate theta on (1, inf)
  UnimodalGamma,    // gamma with mode 1, shape 1/theta + 1, rate 1/theta
  InverseGaussian,  // reparameterized IG with mode 1
  PowerFunction,    // theta w^(theta-1) on (0, 1)
  Pareto,           // theta w^-(theta+1) on (1, inf)
  UniformTail,      // uniform on (1-theta, 1)
  GammaApp,         // gamma with mean 1, shape = rate = theta/2
};

constexpr int kNumFamilies = 8;

inline constexpr Family kAllFamilies[kNumFamilies] = {
    Family::TwoPoint,        Family::ShiftedExp,    Family::UnimodalGamma,
    Family::InverseGaussian, Family::PowerFunction, Family::Pareto,
    Family::UniformTail,     Family::GammaApp};

// Model tags used in JSON/CSV output and on the command line.
std::string family_tag(Family f);
std::optional<Family> family_from_tag(const std::string& tag);

struct MixingLaw {
  Family family;
  double theta1;  // the single tailedness parameter for one-theta laws
  double theta2;  // TwoPoint only

  static MixingLaw two_point(double theta1, double theta2);
  static MixingLaw shifted_exp(double theta);
  static MixingLaw unimodal_gamma(double theta);
  static MixingLaw inverse_gaussian(double theta);
  static MixingLaw power_function(double theta);
  static MixingLaw pareto(double theta);
  static MixingLaw uniform_tail(double theta);
  static MixingLaw gamma_app(double theta);

  // Generic constructor for one-theta families; two thetas for TwoPoint.
  static MixingLaw make(Family f, double theta1, double theta2 = 0.0);

  int n_theta() const { return family == Family::TwoPoint ? 2 : 1; }
  void validate() const;
};

struct ALSMParams {
  ALParams al;
  MixingLaw mixing;

  void validate() const {
    al.validate();
    mixing.validate();
  }
};

struct Moments {
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> skewness;
  std::optional<double> kurtosis;  // raw (non-excess)
};

// p_r(kappa) = sum_{j=0}^r (-kappa^2)^j = (1 + (-1)^r kappa^(2(r+1)))/(1+kappa^2).
double p_r(int r, double kappa);

// E(1/W^r), r >= 1. Throws MomentDoesNotExistError outside the
// existence region; the _opt form returns nullopt instead.
double inv_w_moment(const MixingLaw& m, int r);
std::optional<double> inv_w_moment_opt(const MixingLaw& m, int r);

// Mixing density h(w; theta) and its support. For TwoPoint (a point
// mass pair) the pdf is not defined; callers handle it as a finite sum.
double mixing_pdf(const MixingLaw& m, double w);
std::pair<double, double> mixing_support(const MixingLaw& m);

// log F(delta) where the ALSM pdf is kappa/(beta (1+kappa^2)) * F(delta).
double log_f_delta(const MixingLaw& m, double d);

double alsm_pdf(double x, const ALSMParams& p);
double alsm_logpdf(double x, const ALSMParams& p);

// The defining mixture integral evaluated by quadrature (finite sum
// for TwoPoint); the oracle for alsm_pdf.
double alsm_pdf_numeric(double x, const ALSMParams& p,
                        const QuadratureConfig& cfg = {1e-12, 1e-12, 2000});

Moments alsm_moments(const ALSMParams& p);

// E|X-mu|^a for a > -1; absent when E(1/W^a) does not exist.
// Non-integer a integrates w^-a against the mixing density.
std::optional<double> alsm_abs_moment(const ALSMParams& p, double a);

std::vector<double> mixing_sample(const MixingLaw& m, std::size_t n,
                                  std::uint64_t seed);
std::vector<double> alsm_sample(const ALSMParams& p, std::size_t n,
                                std::uint64_t seed);

double alsm_mode(const ALSMParams& p);

// A posteriori probability that x comes from the reference AL
// component of a TwoPoint model; above 1/2 flags "from reference".
double tp_posterior_good(double x, const ALSMParams& p);

double alsm_loglik(std::span<const double> data, const ALSMParams& p);

}  // namespace alsm

#endif
