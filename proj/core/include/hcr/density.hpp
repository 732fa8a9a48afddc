#pragma once

#include "hcr/coefficients.hpp"
#include "hcr/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hcr {

/// Accumulation order used by estimate().
enum class Summation
{
  /// Reference: one accumulator per index, rows added in sample order.
  sequential,
  /// Recursive halving of the sample; more accurate for n > 10^6.
  pairwise,
  /// Rows processed in blocks as a matrix product over split coordinates.
  /// Agrees with sequential to ~1e-13 and is much faster for large bases.
  blocked,
};

struct EstimateOptions
{
  Summation summation = Summation::sequential;
  std::uint64_t basis_cap = kDefaultBasisCap;
};

/// Mean of every product basis function over the sample rows (n x d, in [0,1]).
CoefficientTensor estimate(const Matrix& sample, const BasisSpec& spec,
                           const EstimateOptions& options = {});

/// rho(x) = sum_j a_j f_j(x); may be negative.
double evaluate(const CoefficientTensor& coeffs, std::span<const double> x);

/// Densities at every row of points.
std::vector<double> evaluate_many(const CoefficientTensor& coeffs, const Matrix& points);

/// Per-entry noise level of estimated coefficients.
struct NoiseEstimate
{
  /// Aligned with coeffs entries: std(f_j over sample) / sqrt(n).
  std::vector<double> sigma;
  /// 1/sqrt(n), the level expected under a uniform density.
  double baseline = 0.0;
};

/// sigma_j uses the population standard deviation of f_j(x^t); n >= 2.
NoiseEstimate sigma(const CoefficientTensor& coeffs, const Matrix& sample);

/// 1/sqrt(n).
double baseline_sigma(std::size_t n);

struct CoefficientRow
{
  MultiIndex index;
  double value = 0.0;
  double sigma = 0.0;
  double z = 0.0; ///< value / sigma, 0 when sigma is 0
};

/// Normalization entry first, then entries by decreasing |value|.
struct CoefficientReport
{
  int degree = 0; ///< basis degree, used for index rendering
  std::vector<CoefficientRow> rows;
};

/// k largest |a_j| over non-zero indices, prefixed by the all-zeros entry.
CoefficientReport top_k(const CoefficientTensor& coeffs, const Matrix& sample, std::size_t k);

/// Exact projection onto the kept coordinates (ascending, distinct).
CoefficientTensor marginalize(const CoefficientTensor& coeffs, std::span<const int> keep);

/// Density over the non-context coordinates with the context fixed.
///
/// With renormalize, coefficients are divided by the context marginal
/// density; a non-positive marginal throws NonPositiveDensity.
CoefficientTensor condition_slice(const CoefficientTensor& coeffs,
                                  std::span<const int> ctx_coords,
                                  std::span<const double> ctx_values,
                                  bool renormalize);

/// Drops entries with |a_j| < threshold * sigma_j; the all-zeros entry stays.
CoefficientTensor prune(const CoefficientTensor& coeffs, const Matrix& sample,
                        double threshold_sigmas);

struct RegionOptions
{
  int resolution = 100;             ///< cells per axis, used when d <= 3
  std::uint64_t mc_samples = 1'000'000; ///< used when d > 3
  std::uint64_t seed = 0;
};

struct RegionStats
{
  double volume_fraction = 0.0;
  /// Share of the positive part of rho lying where rho > T. Negative
  /// densities are clamped to zero for this integral only.
  double mass_fraction = 0.0;
  bool monte_carlo = false;
  std::uint64_t evaluations = 0;
};

/// Volume and probability mass of {x : rho(x) > threshold}.
RegionStats region_stats(const CoefficientTensor& coeffs, double threshold,
                         const RegionOptions& options = {});

} // namespace hcr
