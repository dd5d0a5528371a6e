#ifndef ALSM_CSV_HPP
#define ALSM_CSV_HPP

#include <optional>
#include <string>

#include "alsm/stats.hpp"

namespace alsm {

enum class SeriesKind { Prices, Returns };

struct IngestResult {
  ReturnSeries series;
  std::size_t dropped_rows = 0;  // rows with missing/blank values
};

// Read a header-bearing comma-separated file and extract a return
// series from the named column. kind=Prices takes r_i = ln(p_{i+1}/p_i)
// over the surviving rows in file order; kind=Returns passes the
// values through. Rows with a missing value in the selected column are
// dropped and counted. Throws MissingColumnError,
// NonPositivePriceError (with the 1-based data row) and
// FewerThanTwoPricesError.
IngestResult ingest_csv(const std::string& path, const std::string& column,
                        SeriesKind kind,
                        const std::optional<std::string>& date_column = {});

}  // namespace alsm

#endif
