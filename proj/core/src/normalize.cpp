#include "hcr/normalize.hpp"

#include "hcr/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hcr {

void
RawSeries::validate() const
{
  if (values.cols() < 1)
    throw InvalidInput("series needs at least one variable");
  if (names.size() != vars())
    throw InvalidInput("series has " + std::to_string(names.size()) + " names for " +
                       std::to_string(vars()) + " columns");
  if (!times.empty() && times.size() != rows())
    throw InvalidInput("series has " + std::to_string(times.size()) + " time labels for " +
                       std::to_string(rows()) + " rows");
  if (!values.allFinite())
    throw InvalidInput("series contains non-finite values");
}

RawSeries
RawSeries::select(std::span<const std::string> columns) const
{
  RawSeries out;
  out.times = times;
  out.values.resize(values.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    auto it = std::find(names.begin(), names.end(), columns[c]);
    if (it == names.end())
      throw InvalidInput("unknown column '" + columns[c] + "'");
    out.values.col(static_cast<Eigen::Index>(c)) = values.col(it - names.begin());
    out.names.push_back(columns[c]);
  }
  return out;
}

std::string
to_string(Distribution kind)
{
  return kind == Distribution::laplace ? "laplace" : "gaussian";
}

Distribution
parse_distribution(const std::string& name)
{
  if (name == "laplace")
    return Distribution::laplace;
  if (name == "gaussian")
    return Distribution::gaussian;
  throw InvalidInput("unknown normalizer '" + name + "' (expected laplace or gaussian)");
}

double
Normalizer::pdf(double y) const
{
  const double z = (y - location) / scale;
  if (kind == Distribution::laplace)
    return std::exp(-std::abs(z)) / (2.0 * scale);
  return std::exp(-0.5 * z * z) / (scale * std::sqrt(2.0 * std::numbers::pi));
}

double
Normalizer::cdf(double y) const
{
  const double z = (y - location) / scale;
  if (kind == Distribution::laplace)
    return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
  return boost::math::cdf(boost::math::normal_distribution<double>(), z);
}


double
Normalizer::quantile(double u) const
{
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("quantile argument must lie in (0, 1)");
  if (kind == Distribution::laplace) {
    if (u < 0.5)
      return location + scale * std::log(2.0 * u);
    return location - scale * std::log(2.0 * (1.0 - u));
  }
  return location + scale * boost::math::quantile(boost::math::normal_distribution<double>(), u);
}

ResidualSeries
difference_series(const RawSeries& raw)
{
  if (raw.rows() < 2)
    throw InvalidInput("differencing needs at least 2 rows, got " + std::to_string(raw.rows()));
  if (raw.names.size() != raw.vars())
    throw InvalidInput("series names do not match column count");
  ResidualSeries out;
  out.names = raw.names;
  const auto n = raw.values.rows();
  out.values = raw.values.bottomRows(n - 1) - raw.values.topRows(n - 1);
  return out;
}

namespace {

void
check_fit_input(std::span<const double> samples)
{
  if (samples.size() < 2)
    throw InvalidInput("fitting a normalizer needs at least 2 samples");
  for (double v : samples)
    if (!std::isfinite(v))
      throw InvalidInput("normalizer samples must be finite");
}

double
median(std::span<const double> samples)
{
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1)
    return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

} // namespace

Normalizer
fit_laplace(std::span<const double> samples)
{
  check_fit_input(samples);
  const double mu = median(samples);
  double total = 0.0;
  for (double v : samples)
    total += std::abs(v - mu);
  const double b = total / static_cast<double>(samples.size());
  if (!(b > 0.0))
    throw DegenerateScale("all samples are identical; Laplace scale would be 0");
  return { Distribution::laplace, mu, b };
}

Normalizer
fit_gaussian(std::span<const double> samples)
{
  check_fit_input(samples);
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples)
    ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0))
    throw DegenerateScale("all samples are identical; Gaussian scale would be 0");
  return { Distribution::gaussian, mean, sigma };
}

Normalizer
fit_normalizer(Distribution kind, std::span<const double> samples)
{
  return kind == Distribution::laplace ? fit_laplace(samples) : fit_gaussian(samples);
}

std::vector<Normalizer>
fit_normalizers(Distribution kind, const ResidualSeries& res, std::span<const std::size_t> rows)
{
  std::vector<Normalizer> out;
  out.reserve(res.vars());
  std::vector<double> column;
  for (Eigen::Index c = 0; c < res.values.cols(); ++c) {
    column.clear();
    if (rows.empty()) {
      for (Eigen::Index r = 0; r < res.values.rows(); ++r)
        column.push_back(res.values(r, c));
    } else {
      for (std::size_t r : rows) {
        if (r >= res.rows())
          throw InvalidInput("normalizer row index out of range");
        column.push_back(res.values(static_cast<Eigen::Index>(r), c));
      }
    }
    try {
      out.push_back(fit_normalizer(kind, column));
    } catch (const DegenerateScale&) {
      throw DegenerateScale("variable '" + res.names[static_cast<std::size_t>(c)] +
                            "' has constant residuals; scale would be 0");
    }
  }
  return out;
}

UniformSeries
normalize_series(const ResidualSeries& res, std::span<const Normalizer> params)
{
  if (params.size() != res.vars())
    throw InvalidInput("got " + std::to_string(params.size()) + " normalizers for " +
                       std::to_string(res.vars()) + " variables");
  UniformSeries out;
  out.names = res.names;
  out.values.resize(res.values.rows(), res.values.cols());
  for (Eigen::Index r = 0; r < res.values.rows(); ++r)
    for (Eigen::Index c = 0; c < res.values.cols(); ++c) {
      const double u = params[static_cast<std::size_t>(c)].cdf(res.values(r, c));
      out.values(r, c) = std::clamp(u, kClampEps, 1.0 - kClampEps);
    }
  return out;
}

double
unnormalize_density(double rho_x, const Normalizer& params, double y)
{
  return rho_x * params.pdf(y);
}

std::vector<std::pair<double, double>>
empirical_cdf(std::span<const double> samples)
{
  if (samples.empty())
    throw InvalidInput("empirical CDF of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  return out;
}

} // namespace hcr
