#pragma once

#include "hcr/coefficients.hpp"
#include "hcr/density.hpp"
#include "hcr/matrix.hpp"
#include "hcr/model.hpp"
#include "hcr/table.hpp"

#include <array>
#include <string>
#include <vector>

namespace hcr {

/// Sorted predicted densities against their rank fraction (i+1)/n.
struct CurveSheet
{
  Metadata metadata;
  std::vector<double> rank_fraction;
  std::vector<double> density;
};

/// Fraction of evaluated points with rho > T, per threshold.
struct ThresholdSheet
{
  Metadata metadata;
  std::vector<double> thresholds;
  std::vector<double> fractions;
};

struct CoefficientSheet
{
  Metadata metadata;
  int dim = 0;
  int degree = 0;
  std::vector<CoefficientRow> rows;
};

/// Pair marginal evaluated at cell centers of an r x r grid.
/// values(i, k) is the density at ((i + 0.5) / r, (k + 0.5) / r).
struct GridSheet
{
  Metadata metadata;
  std::array<std::string, 2> names;
  int resolution = 0;
  Matrix values;
  Matrix overlay; ///< optional sample points, k x 2
};

struct RegionSheet
{
  Metadata metadata;
  double threshold = 0.0;
  RegionStats stats;
};

CurveSheet emit_sorted_curve(const EvaluationReport& report);
ThresholdSheet emit_threshold_table(const EvaluationReport& report);
CoefficientSheet emit_coefficients(const CoefficientReport& report, int dim);

/// Marginalizes to `pair` and evaluates on the cell-center grid. `sample`
/// rows (full coordinates) are projected onto the pair for the overlay.
GridSheet emit_pair_grid(const CoefficientTensor& coeffs, std::array<int, 2> pair,
                         int resolution, const std::array<std::string, 2>& names,
                         const Matrix* sample = nullptr);

/// Report metadata shared by the emitters (seed, sizes, negative fraction).
Metadata report_metadata(const EvaluationReport& report);

Table to_table(const CurveSheet& sheet);
Table to_table(const ThresholdSheet& sheet);
Table to_table(const CoefficientSheet& sheet);
Table to_table(const GridSheet& sheet);
Table overlay_table(const GridSheet& sheet);
Table to_table(const RegionSheet& sheet);

CurveSheet read_curve(const Table& table);
ThresholdSheet read_thresholds(const Table& table);
CoefficientSheet read_coefficients(const Table& table);
GridSheet read_grid(const Table& table);
RegionSheet read_region(const Table& table);

/// "62.00%" style rendering of a fraction.
std::string percent_string(double fraction);

/// One row per configuration: sizes, negative fraction and all thresholds.
Table matrix_summary(const std::vector<SplitEvaluation>& results);

} // namespace hcr
