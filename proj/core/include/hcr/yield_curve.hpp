#pragma once

#include "hcr/matrix.hpp"
#include "hcr/normalize.hpp"

#include <array>
#include <string>
#include <vector>

namespace hcr {

/// Conventional Diebold-Li decay per month.
inline constexpr double kDieboldLiLambda = 0.0609;

/// Yields (percent p.a.) by date and maturity (months).
struct YieldTable
{
  std::vector<std::string> dates;
  std::vector<double> maturities;
  Matrix yields; ///< dates x maturities

  /// Maturities positive, strictly increasing, at least three.
  void validate() const;
};

/// "3", "3m", "2y" -> months.
double parse_maturity(const std::string& label);

/// Reads a RawSeries whose column names are maturity labels.
YieldTable yield_table_from(const RawSeries& series);

/// Level, slope and curvature loadings at maturity tau.
std::array<double, 3> diebold_li_loadings(double tau, double lambda);

/// Per-date least-squares fit of the three loadings; columns b1, b2, b3.
RawSeries diebold_li_fit(const YieldTable& table, double lambda = kDieboldLiLambda);

} // namespace hcr
