#pragma once

#include <Eigen/Core>

#include <span>

namespace hcr {

/// Row-major dense matrix; one observation per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double>
row_span(const Matrix& m, Eigen::Index row)
{
  return { m.data() + row * m.cols(), static_cast<std::size_t>(m.cols()) };
}

} // namespace hcr
