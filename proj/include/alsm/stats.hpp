#ifndef ALSM_STATS_HPP
#define ALSM_STATS_HPP

#include <span>
#include <string>
#include <vector>

namespace alsm {

struct ReturnSeries {
  std::vector<double> values;  // log-returns
  std::string label;
  std::string source;
};

// Summary block for a return series. Skewness and kurtosis use the
// n-1 standard deviation in the denominator and 1/n sums in the
// numerator; kurtosis is raw, with the excess value alongside. The
// degenerate constant series leaves the shape statistics NaN.
struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double st_dev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;         // raw
  double excess_kurtosis = 0.0;  // raw - 3
  double minimum = 0.0;
  double maximum = 0.0;
  double jarque_bera_stat = 0.0;
  double jarque_bera_pvalue = 0.0;
};

DescriptiveStats describe(const ReturnSeries& s);

double median_of(std::span<const double> data);

}  // namespace alsm

#endif
