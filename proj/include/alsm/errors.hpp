#ifndef ALSM_ERRORS_HPP
#define ALSM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alsm {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input data (CSV problems, invalid parameter values, ...).
struct InputError : Error {
  using Error::Error;
};

struct MissingColumnError : InputError {
  explicit MissingColumnError(const std::string& column)
      : InputError("column not found: " + column) {}
};

struct NonPositivePriceError : InputError {
  explicit NonPositivePriceError(std::size_t row)
      : InputError("non-positive price at data row " + std::to_string(row)),
        row(row) {}
  std::size_t row;
};

struct FewerThanTwoPricesError : InputError {
  FewerThanTwoPricesError()
      : InputError("need at least two prices to form returns") {}
};

// The Q1 profile optimizer landed on the smallest or largest order
// statistic, where the scale/asymmetry updates do not exist.
struct DegenerateSupportError : Error {
  using Error::Error;
};

// E(1/W^r) requested outside the existence region of the mixing law.
struct MomentDoesNotExistError : Error {
  using Error::Error;
};

// No bracket / no interior maximum found in a scalar theta search.
struct BracketFailureError : Error {
  using Error::Error;
};

// Alternative model log-likelihood fell below the nested null beyond slack.
struct NestingViolationError : Error {
  using Error::Error;
};

// Posterior normalizer vanished for some observation during the E-step.
struct UnderflowError : Error {
  UnderflowError(const std::string& what, std::size_t index)
      : Error(what + " (observation " + std::to_string(index) + ")"),
        index(index) {}
  std::size_t index;
};

// Adaptive quadrature ran out of subdivisions; best estimate attached.
struct QuadratureNonConvergence : Error {
  QuadratureNonConvergence(const std::string& what, double best, double err)
      : Error(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

}  // namespace alsm

#endif
