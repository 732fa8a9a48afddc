#include "hcr/yield_curve.hpp"

#include "hcr/error.hpp"
#include "hcr/table.hpp"

#include <Eigen/QR>

#include <cmath>

namespace hcr {

void
YieldTable::validate() const
{
  if (maturities.size() < 3)
    throw InvalidInput("yield table needs at least 3 maturities");
  for (std::size_t i = 0; i < maturities.size(); ++i) {
    if (!(maturities[i] > 0.0))
      throw InvalidInput("maturities must be positive");
    if (i > 0 && !(maturities[i] > maturities[i - 1]))
      throw InvalidInput("maturities must be strictly increasing");
  }
  if (yields.cols() != static_cast<Eigen::Index>(maturities.size()))
    throw InvalidInput("yield matrix width does not match maturities");
  if (!dates.empty() && dates.size() != static_cast<std::size_t>(yields.rows()))
    throw InvalidInput("yield table date count does not match rows");
  if (!yields.allFinite())
    throw InvalidInput("yield table contains non-finite values");
}

double
parse_maturity(const std::string& label)
{
  std::string_view text = label;
  double factor = 1.0;
  if (!text.empty() && (text.back() == 'm' || text.back() == 'M')) {
    text.remove_suffix(1);
  } else if (!text.empty() && (text.back() == 'y' || text.back() == 'Y')) {
    text.remove_suffix(1);
    factor = 12.0;
  }
  try {
    return parse_double(text) * factor;
  } catch (const InvalidInput&) {
    throw InvalidInput("column '" + label + "' is not a maturity (e.g. 3, 3m, 2y)");
  }
}

YieldTable
yield_table_from(const RawSeries& series)
{
  YieldTable table;
  table.dates = series.times;
  for (const auto& name : series.names)
    table.maturities.push_back(parse_maturity(name));
  table.yields = series.values;
  table.validate();
  return table;
}

std::array<double, 3>
diebold_li_loadings(double tau, double lambda)
{
  const double x = lambda * tau;
  const double decay = std::exp(-x);
  // (1 - e^-x) / x, with -expm1 for accuracy at small x
  const double slope = -std::expm1(-x) / x;
  return { 1.0, slope, slope - decay };
}

RawSeries
diebold_li_fit(const YieldTable& table, double lambda)
{
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidInput("Diebold-Li decay must be positive");
  table.validate();
  const auto k = static_cast<Eigen::Index>(table.maturities.size());
  Eigen::MatrixXd design(k, 3);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto l = diebold_li_loadings(table.maturities[static_cast<std::size_t>(i)], lambda);
    design(i, 0) = l[0];
    design(i, 1) = l[1];
    design(i, 2) = l[2];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3)
    throw RankDeficient("Diebold-Li loading matrix is rank deficient for these maturities");

  RawSeries out;
  out.names = { "b1", "b2", "b3" };
  out.times = table.dates;
  out.values.resize(table.yields.rows(), 3);
  for (Eigen::Index r = 0; r < table.yields.rows(); ++r) {
    const Eigen::VectorXd y = table.yields.row(r).transpose();
    out.values.row(r) = qr.solve(y).transpose();
  }
  return out;
}

} // namespace hcr
