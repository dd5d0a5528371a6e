#ifndef ALSM_QUADRATURE_HPP
#define ALSM_QUADRATURE_HPP

#include <functional>

namespace alsm {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// Adaptive Gauss-Kronrod (7-15) integration of f over (a, b).
// Either endpoint may be infinite; infinite ranges are mapped onto
// (0,1) or (-1,1) by rational substitutions. Subdivision proceeds
// worst-interval-first until |error| <= max(abs_tol, rel_tol*|value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg = {});

// Same, but throws QuadratureNonConvergence (with the best estimate
// attached) if the subdivision budget is exhausted.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg = {});

}  // namespace alsm

#endif
