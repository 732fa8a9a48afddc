#include "hcr/report.hpp"

#include "hcr/error.hpp"

#include <charconv>

namespace hcr {

namespace {

Metadata
strip_keys(const Metadata& metadata, std::initializer_list<std::string_view> keys)
{
  Metadata out;
  for (const auto& entry : metadata) {
    bool drop = false;
    for (auto k : keys)
      drop = drop || entry.first == k;
    if (!drop)
      out.push_back(entry);
  }
  return out;
}

void
require_columns(const Table& table, std::initializer_list<const char*> names)
{
  if (table.header.size() != names.size())
    throw InvalidInput("unexpected table layout");
  std::size_t i = 0;
  for (const char* name : names)
    if (table.header[i++] != name)
      throw InvalidInput("unexpected column '" + table.header[i - 1] + "', expected '" + name + "'");
}

} // namespace

std::string
percent_string(double fraction)
{
  char buf[64];
  auto [ptr, ec] =
    std::to_chars(buf, buf + sizeof buf, fraction * 100.0, std::chars_format::fixed, 2);
  if (ec != std::errc())
    throw InvalidInput("cannot format percentage");
  return std::string(buf, ptr) + "%";
}

Metadata
report_metadata(const EvaluationReport& report)
{
  return { { "seed", std::to_string(report.seed) },
           { "n_train", std::to_string(report.n_train) },
           { "n_test", std::to_string(report.n_test) },
           { "negative_fraction", format_double(report.negative_fraction) } };
}

CurveSheet
emit_sorted_curve(const EvaluationReport& report)
{
  if (report.sorted_densities.empty())
    throw InvalidInput("sorted-density curve of an empty report");
  CurveSheet sheet;
  sheet.metadata = report_metadata(report);
  const double n = static_cast<double>(report.sorted_densities.size());
  for (std::size_t i = 0; i < report.sorted_densities.size(); ++i) {
    sheet.rank_fraction.push_back(static_cast<double>(i + 1) / n);
    sheet.density.push_back(report.sorted_densities[i]);
  }
  return sheet;
}

ThresholdSheet
emit_threshold_table(const EvaluationReport& report)
{
  ThresholdSheet sheet;
  sheet.metadata = report_metadata(report);
  sheet.thresholds = report.thresholds;
  sheet.fractions = report.threshold_fractions;
  return sheet;
}

CoefficientSheet
emit_coefficients(const CoefficientReport& report, int dim)
{
  CoefficientSheet sheet;
  sheet.dim = dim;
  sheet.degree = report.degree;
  sheet.rows = report.rows;
  return sheet;
}

GridSheet
emit_pair_grid(const CoefficientTensor& coeffs, std::array<int, 2> pair, int resolution,
               const std::array<std::string, 2>& names, const Matrix* sample)
{
  if (resolution < 2)
    throw InvalidInput("grid resolution must be at least 2");
  if (pair[0] == pair[1])
    throw InvalidInput("grid pair must name two different coordinates");
  const bool swapped = pair[0] > pair[1];
  const int keep[2] = { std::min(pair[0], pair[1]), std::max(pair[0], pair[1]) };
  const CoefficientTensor marginal = marginalize(coeffs, keep);

  GridSheet sheet;
  sheet.names = names;
  sheet.resolution = resolution;
  const Eigen::Index r = resolution;
  Matrix points(r * r, 2);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < r; ++k) {
      const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(r);
      const double y = (static_cast<double>(k) + 0.5) / static_cast<double>(r);
      points(i * r + k, 0) = swapped ? y : x;
      points(i * r + k, 1) = swapped ? x : y;
    }
  const auto values = evaluate_many(marginal, points);
  sheet.values.resize(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < r; ++k)
      sheet.values(i, k) = values[static_cast<std::size_t>(i * r + k)];

  if (sample) {
    if (sample->cols() != coeffs.dim())
      throw InvalidInput("overlay sample dimension does not match the density");
    sheet.overlay.resize(sample->rows(), 2);
    sheet.overlay.col(0) = sample->col(pair[0]);
    sheet.overlay.col(1) = sample->col(pair[1]);
  }
  return sheet;
}

Table
to_table(const CurveSheet& sheet)
{
  Table t;
  t.metadata = sheet.metadata;
  t.header = { "rank_fraction", "density" };
  for (std::size_t i = 0; i < sheet.density.size(); ++i)
    t.rows.push_back({ format_double(sheet.rank_fraction[i]), format_double(sheet.density[i]) });
  return t;
}

CurveSheet
read_curve(const Table& table)
{
  require_columns(table, { "rank_fraction", "density" });
  CurveSheet sheet;
  sheet.metadata = table.metadata;
  for (const auto& row : table.rows) {
    sheet.rank_fraction.push_back(parse_double(row[0]));
    sheet.density.push_back(parse_double(row[1]));
  }
  return sheet;
}

Table
to_table(const ThresholdSheet& sheet)
{
  Table t;
  t.metadata = sheet.metadata;
  t.header = { "threshold", "fraction", "percent" };
  for (std::size_t i = 0; i < sheet.thresholds.size(); ++i)
    t.rows.push_back({ format_double(sheet.thresholds[i]), format_double(sheet.fractions[i]),
                       percent_string(sheet.fractions[i]) });
  return t;
}

ThresholdSheet
read_thresholds(const Table& table)
{
  require_columns(table, { "threshold", "fraction", "percent" });
  ThresholdSheet sheet;
  sheet.metadata = table.metadata;
  for (const auto& row : table.rows) {
    sheet.thresholds.push_back(parse_double(row[0]));
    sheet.fractions.push_back(parse_double(row[1]));
  }
  return sheet;
}

Table
to_table(const CoefficientSheet& sheet)
{
  Table t;
  t.metadata = sheet.metadata;
  t.metadata.emplace_back("dim", std::to_string(sheet.dim));
  t.metadata.emplace_back("degree", std::to_string(sheet.degree));
  t.header = { "index", "value", "sigma", "z" };
  for (const auto& row : sheet.rows)
    t.rows.push_back({ index_string(row.index, sheet.degree), format_double(row.value),
                       format_double(row.sigma), format_double(row.z) });
  return t;
}

CoefficientSheet
read_coefficients(const Table& table)
{
  require_columns(table, { "index", "value", "sigma", "z" });
  CoefficientSheet sheet;
  sheet.dim = static_cast<int>(parse_integer(table.meta("dim")));
  sheet.degree = static_cast<int>(parse_integer(table.meta("degree")));
  sheet.metadata = strip_keys(table.metadata, { "dim", "degree" });
  for (const auto& row : table.rows) {
    CoefficientRow r;
    r.index = parse_index_string(row[0], sheet.dim);
    r.value = parse_double(row[1]);
    r.sigma = parse_double(row[2]);
    r.z = parse_double(row[3]);
    sheet.rows.push_back(std::move(r));
  }
  return sheet;
}

Table
to_table(const GridSheet& sheet)
{
  Table t;
  t.metadata = sheet.metadata;
  t.metadata.emplace_back("x", sheet.names[0]);
  t.metadata.emplace_back("y", sheet.names[1]);
  t.metadata.emplace_back("resolution", std::to_string(sheet.resolution));
  t.header = { "x", "y", "density" };
  const double r = sheet.resolution;
  for (Eigen::Index i = 0; i < sheet.values.rows(); ++i)
    for (Eigen::Index k = 0; k < sheet.values.cols(); ++k)
      t.rows.push_back({ format_double((static_cast<double>(i) + 0.5) / r),
                         format_double((static_cast<double>(k) + 0.5) / r),
                         format_double(sheet.values(i, k)) });
  return t;
}

Table
overlay_table(const GridSheet& sheet)
{
  Table t;
  t.metadata = { { "x", sheet.names[0] }, { "y", sheet.names[1] } };
  t.header = { "x", "y" };
  for (Eigen::Index i = 0; i < sheet.overlay.rows(); ++i)
    t.rows.push_back({ format_double(sheet.overlay(i, 0)), format_double(sheet.overlay(i, 1)) });
  return t;
}

GridSheet
read_grid(const Table& table)
{
  require_columns(table, { "x", "y", "density" });
  GridSheet sheet;
  sheet.names = { table.meta("x"), table.meta("y") };
  sheet.resolution = static_cast<int>(parse_integer(table.meta("resolution")));
  sheet.metadata = strip_keys(table.metadata, { "x", "y", "resolution" });
  const Eigen::Index r = sheet.resolution;
  if (r < 2 || static_cast<std::size_t>(r * r) != table.rows.size())
    throw InvalidInput("grid table does not hold resolution^2 cells");
  sheet.values.resize(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < r; ++k)
      sheet.values(i, k) = parse_double(table.rows[static_cast<std::size_t>(i * r + k)][2]);
  return sheet;
}

Table
to_table(const RegionSheet& sheet)
{
  Table t;
  t.metadata = sheet.metadata;
  t.metadata.emplace_back("method", sheet.stats.monte_carlo ? "monte_carlo" : "grid");
  t.metadata.emplace_back("evaluations", std::to_string(sheet.stats.evaluations));
  t.header = { "threshold", "volume_fraction", "mass_fraction" };
  t.rows.push_back({ format_double(sheet.threshold), format_double(sheet.stats.volume_fraction),
                     format_double(sheet.stats.mass_fraction) });
  return t;
}

RegionSheet
read_region(const Table& table)
{
  require_columns(table, { "threshold", "volume_fraction", "mass_fraction" });
  if (table.rows.size() != 1)
    throw InvalidInput("region table must hold exactly one row");
  RegionSheet sheet;
  sheet.stats.monte_carlo = table.meta("method") == "monte_carlo";
  sheet.stats.evaluations = static_cast<std::uint64_t>(parse_integer(table.meta("evaluations")));
  sheet.metadata = strip_keys(table.metadata, { "method", "evaluations" });
  sheet.threshold = parse_double(table.rows[0][0]);
  sheet.stats.volume_fraction = parse_double(table.rows[0][1]);
  sheet.stats.mass_fraction = parse_double(table.rows[0][2]);
  return sheet;
}

Table
matrix_summary(const std::vector<SplitEvaluation>& results)
{
  Table t;
  t.header = { "variables", "order", "degree", "n_train", "n_test", "negative_fraction" };
  if (!results.empty())
    for (double th : results.front().report.thresholds)
      t.header.push_back("above_" + format_double(th));
  for (const auto& r : results) {
    std::string vars;
    for (const auto& v : r.config.variables)
      vars += (vars.empty() ? "" : "+") + v;
    std::vector<std::string> row{ vars,
                                  std::to_string(r.config.order),
                                  std::to_string(r.config.degree),
                                  std::to_string(r.report.n_train),
                                  std::to_string(r.report.n_test),
                                  format_double(r.report.negative_fraction) };
    for (double f : r.report.threshold_fractions)
      row.push_back(format_double(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

} // namespace hcr
