#include "hcr/csv_input.hpp"

#include "hcr/error.hpp"
#include "hcr/table.hpp"

#include <algorithm>
#include <cmath>

namespace hcr {

namespace {

std::string_view
trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view>
fields_of(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
}

} // namespace

RawSeries
parse_csv(std::string_view text, const CsvSelection& selection)
{
  std::vector<std::string_view> lines;
  std::vector<std::size_t> line_numbers;
  std::size_t pos = 0;
  std::size_t number = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    ++number;
    auto line = trim(text.substr(pos, end - pos));
    if (!line.empty()) {
      lines.push_back(line);
      line_numbers.push_back(number);
    }
    pos = end + 1;
  }
  if (lines.empty())
    throw InvalidInput("input has no header row");
  if (lines.size() == 1)
    throw InvalidInput("input is empty: header row but no data rows");

  const auto header = fields_of(lines[0]);
  auto position = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw InvalidInput("input has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  std::optional<std::size_t> date_pos;
  if (selection.date_column)
    date_pos = position(*selection.date_column);

  std::vector<std::string> names = selection.columns;
  if (names.empty())
    for (std::size_t i = 0; i < header.size(); ++i)
      if (!date_pos || i != *date_pos)
        names.emplace_back(header[i]);
  if (names.empty())
    throw InvalidInput("no numeric columns selected");
  std::vector<std::size_t> cols;
  for (const auto& name : names)
    cols.push_back(position(name));

  RawSeries series;
  series.names = names;
  series.values.resize(static_cast<Eigen::Index>(lines.size() - 1),
                       static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = fields_of(lines[r]);
    const std::string where = "row " + std::to_string(line_numbers[r]);
    if (fields.size() != header.size())
      throw InvalidInput(where + " has " + std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(header.size()));
    if (date_pos)
      series.times.emplace_back(fields[*date_pos]);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      double value;
      try {
        value = parse_double(fields[cols[c]]);
      } catch (const InvalidInput&) {
        throw InvalidInput(where + ", column '" + names[c] + "': '" +
                           std::string(fields[cols[c]]) + "' is not a number");
      }
      if (!std::isfinite(value))
        throw InvalidInput(where + ", column '" + names[c] + "': value is not finite");
      series.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return series;
}

RawSeries
load_csv(const std::filesystem::path& path, const CsvSelection& selection)
{
  return parse_csv(read_file(path), selection);
}

std::string
write_csv(const RawSeries& series, const std::string& date_column)
{
  Table t;
  const bool with_times = !series.times.empty();
  if (with_times)
    t.header.push_back(date_column);
  t.header.insert(t.header.end(), series.names.begin(), series.names.end());
  for (std::size_t r = 0; r < series.rows(); ++r) {
    std::vector<std::string> row;
    if (with_times)
      row.push_back(series.times[r]);
    for (std::size_t c = 0; c < series.vars(); ++c)
      row.push_back(format_double(series.values(static_cast<Eigen::Index>(r),
                                                static_cast<Eigen::Index>(c))));
    t.rows.push_back(std::move(row));
  }
  return write_table(t);
}

} // namespace hcr
