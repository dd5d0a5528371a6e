#include "alsm/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "alsm/errors.hpp"

namespace alsm {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool missing_value(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "null" || s == "NaN" ||
         s == "nan";
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const std::string& column,
                        SeriesKind kind,
                        const std::optional<std::string>& date_column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw InputError("empty file: " + path);
  const auto header = split_csv_line(line);

  std::ptrdiff_t col = -1, date_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    if (name == column) col = static_cast<std::ptrdiff_t>(i);
    if (date_column && name == *date_column)
      date_col = static_cast<std::ptrdiff_t>(i);
  }
  if (col < 0) throw MissingColumnError(column);
  if (date_column && date_col < 0) throw MissingColumnError(*date_column);

  std::vector<double> values;
  std::size_t dropped = 0;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++data_row;
    const auto fields = split_csv_line(line);
    if (static_cast<std::size_t>(col) >= fields.size()) {
      ++dropped;
      continue;
    }
    const std::string cell = trim(fields[col]);
    if (missing_value(cell)) {
      ++dropped;
      continue;
    }
    double v;
    try {
      std::size_t pos = 0;
      v = std::stod(cell, &pos);
      if (pos != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw InputError("row " + std::to_string(data_row) +
                       ": cannot parse value '" + cell + "'");
    }
    if (kind == SeriesKind::Prices && !(v > 0.0))
      throw NonPositivePriceError(data_row);
    if (!std::isfinite(v))
      throw InputError("row " + std::to_string(data_row) +
                       ": non-finite value");
    values.push_back(v);
  }

  IngestResult out;
  out.dropped_rows = dropped;
  out.series.source = path;
  out.series.label = column;
  if (kind == SeriesKind::Returns) {
    out.series.values = std::move(values);
    return out;
  }
  if (values.size() < 2) throw FewerThanTwoPricesError();
  out.series.values.reserve(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    out.series.values.push_back(std::log(values[i + 1] / values[i]));
  return out;
}

}  // namespace alsm
