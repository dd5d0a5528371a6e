#include "alsm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "alsm/specfun.hpp"

namespace alsm {

double median_of(std::span<const double> data) {
  if (data.empty()) throw std::invalid_argument("median_of: empty data");
  std::vector<double> tmp(data.begin(), data.end());
  const std::size_t n = tmp.size();
  std::nth_element(tmp.begin(), tmp.begin() + n / 2, tmp.end());
  double med = tmp[n / 2];
  if (n % 2 == 0) {
    const double hi = med;
    std::nth_element(tmp.begin(), tmp.begin() + (n / 2 - 1), tmp.end());
    med = 0.5 * (tmp[n / 2 - 1] + hi);
  }
  return med;
}

DescriptiveStats describe(const ReturnSeries& s) {
  const auto& x = s.values;
  if (x.empty()) throw std::invalid_argument("describe: empty series");
  const double n = static_cast<double>(x.size());

  DescriptiveStats d;
  d.n = x.size();
  d.minimum = *std::min_element(x.begin(), x.end());
  d.maximum = *std::max_element(x.begin(), x.end());
  d.median = median_of(x);

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  d.mean = mean;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2 || m2 == 0.0) {
    d.st_dev = 0.0;
    d.skewness = nan;
    d.kurtosis = nan;
    d.excess_kurtosis = nan;
    d.jarque_bera_stat = nan;
    d.jarque_bera_pvalue = nan;
    return d;
  }
  const double s2 = m2 / (n - 1.0);
  const double sd = std::sqrt(s2);
  d.st_dev = sd;
  d.skewness = m3 / (n * sd * sd * sd);
  d.kurtosis = m4 / (n * s2 * s2);
  d.excess_kurtosis = d.kurtosis - 3.0;

  const double jb = n * (d.skewness * d.skewness / 6.0 +
                         d.excess_kurtosis * d.excess_kurtosis / 24.0);
  d.jarque_bera_stat = jb;
  d.jarque_bera_pvalue = regularized_gamma_q(1.0, 0.5 * jb);  // chi^2_2
  return d;
}

}  // namespace alsm
