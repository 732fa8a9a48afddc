#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hcr {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Comma-separated table with a header row.
///
/// Text layout: optional "# key=value" metadata lines, the header line,
/// then one record per line. Fields may not contain commas or newlines;
/// no quoting is performed.
struct Table
{
  Metadata metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Metadata value for key; throws InvalidInput when missing.
  const std::string& meta(std::string_view key) const;
  /// Column position by header name; throws InvalidInput when missing.
  std::size_t column(std::string_view name) const;
};

std::string write_table(const Table& table);
Table parse_table(std::string_view text);

void save_table(const std::filesystem::path& path, const Table& table);
Table load_table(const std::filesystem::path& path);

/// Shortest text that is exactly 17 significant digits, locale-free.
std::string format_double(double value);
/// Strict parse of a whole field; throws InvalidInput.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace hcr
