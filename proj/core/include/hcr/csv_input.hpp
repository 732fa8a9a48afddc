#pragma once

#include "hcr/normalize.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcr {

struct CsvSelection
{
  /// Numeric columns to read, in output order; empty means every column
  /// other than the date column.
  std::vector<std::string> columns;
  /// Column holding opaque time labels.
  std::optional<std::string> date_column;
};

/// Reads a comma-separated file with a header row into a RawSeries.
/// Errors name the offending row (1-based, header is row 1) and column.
RawSeries parse_csv(std::string_view text, const CsvSelection& selection);
RawSeries load_csv(const std::filesystem::path& path, const CsvSelection& selection);

/// Writes names/values (and times, when present) back as CSV.
std::string write_csv(const RawSeries& series, const std::string& date_column = "date");

} // namespace hcr
