#pragma once

#include "hcr/matrix.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcr {

/// Raw parameter time series, one column per variable.
struct RawSeries
{
  std::vector<std::string> names;
  std::vector<std::string> times; ///< opaque labels, may be empty
  Matrix values;

  /// Checks arity, label count and finiteness; throws InvalidInput.
  void validate() const;
  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t vars() const { return static_cast<std::size_t>(values.cols()); }

  /// Column subset by name, keeping row order.
  RawSeries select(std::span<const std::string> columns) const;
};

/// Differences from the previous-value predictor.
struct ResidualSeries
{
  std::vector<std::string> names;
  Matrix values;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t vars() const { return static_cast<std::size_t>(values.cols()); }
};

/// Series mapped through fitted CDFs; entries lie in [eps, 1-eps].
struct UniformSeries
{
  std::vector<std::string> names;
  Matrix values;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t vars() const { return static_cast<std::size_t>(values.cols()); }
};

enum class Distribution
{
  laplace,
  gaussian
};

std::string to_string(Distribution kind);
/// Accepts "laplace" or "gaussian"; throws InvalidInput otherwise.
Distribution parse_distribution(const std::string& name);

/// Fitted location/scale family for one variable.
struct Normalizer
{
  Distribution kind = Distribution::laplace;
  double location = 0.0;
  double scale = 1.0; ///< Laplace b or Gaussian sigma, strictly positive

  double pdf(double y) const;
  double cdf(double y) const;
  /// Inverse of cdf; throws DomainError unless 0 < u < 1.
  double quantile(double u) const;
};

/// Values are clamped into [kClampEps, 1 - kClampEps] after the CDF.
inline constexpr double kClampEps = 1e-12;

ResidualSeries difference_series(const RawSeries& raw);

/// Median and mean absolute deviation from the median.
Normalizer fit_laplace(std::span<const double> samples);
/// Mean and population standard deviation.
Normalizer fit_gaussian(std::span<const double> samples);
Normalizer fit_normalizer(Distribution kind, std::span<const double> samples);

/// One normalizer per column of `res`, optionally restricted to `rows`.
std::vector<Normalizer> fit_normalizers(Distribution kind,
                                        const ResidualSeries& res,
                                        std::span<const std::size_t> rows = {});

UniformSeries normalize_series(const ResidualSeries& res,
                               std::span<const Normalizer> params);

/// Density in original units from a density on the uniform scale.
double unnormalize_density(double rho_x, const Normalizer& params, double y);

/// Sorted (value, rank / n) pairs; ties keep increasing ranks.
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> samples);

} // namespace hcr
