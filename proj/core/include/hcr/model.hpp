#pragma once

#include "hcr/coefficients.hpp"
#include "hcr/density.hpp"
#include "hcr/normalize.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hcr {

/// Which variables, how many lags, and which basis a model uses.
///
/// Context vectors are laid out as the current values of `variables`
/// first, then their values one step back, then two steps back, and so on.
struct ModelConfig
{
  std::vector<std::string> variables;
  int order = 0;
  int degree = 9;
  Distribution normalizer = Distribution::laplace;
  std::optional<double> prune_sigmas;

  int dim() const { return static_cast<int>(variables.size()) * (order + 1); }
  BasisSpec basis() const { return { dim(), degree }; }
  /// Throws InvalidInput or ResourceError.
  void validate(std::uint64_t cap = kDefaultBasisCap) const;
  /// "b1(t)", "b2(t)", "b1(t-1)", ...
  std::vector<std::string> coordinate_names() const;

  bool operator==(const ModelConfig&) const = default;
};

struct Model
{
  ModelConfig config;
  std::vector<Normalizer> normalizers; ///< one per variable, config order
  CoefficientTensor coeffs;
};

/// Thresholds 0, 1, ..., 10.
std::vector<double> default_thresholds();

struct EvaluationReport
{
  std::vector<double> sorted_densities; ///< non-increasing
  std::vector<double> thresholds;
  std::vector<double> threshold_fractions; ///< fraction with rho > T
  double negative_fraction = 0.0;          ///< fraction with rho <= 0
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

/// Context vectors from the named columns of u; n_1 - order rows.
Matrix build_vectors(const UniformSeries& u, std::span<const std::string> variables, int order);

struct FitOptions
{
  Summation summation = Summation::blocked;
  std::uint64_t basis_cap = kDefaultBasisCap;
};

/// residuals -> normalizers -> uniform series -> vectors -> coefficients
/// (-> pruning when configured).
Model fit(const ModelConfig& config, const RawSeries& raw, const FitOptions& options = {});

/// Residuals, uniform series and context vectors of raw data for a model.
Matrix model_vectors(const Model& model, const RawSeries& raw);

struct Prediction
{
  double density = 0.0;
  /// Conditional density of the current values given the context, when
  /// requested. Unnormalized if the context density was not positive.
  std::optional<CoefficientTensor> slice;
  bool slice_normalized = false;
};

/// Density at the latest row of `recent` given the rows before it.
/// Needs at least order + 2 rows of the model's variables.
Prediction predict_density(const Model& model, const RawSeries& recent, bool with_slice = false);

struct Split
{
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// round(n * fraction), halves rounded up.
std::size_t test_size(std::size_t n, double test_fraction);

/// Random disjoint partition of 0..n-1, both sides sorted ascending.
Split split_indices(std::size_t n, double test_fraction, std::uint64_t seed);

/// Row partition of data by split_indices.
std::pair<Matrix, Matrix> split(const Matrix& data, double test_fraction, std::uint64_t seed);

/// Densities of every row of test_vectors under the model.
EvaluationReport evaluate(const Model& model, const Matrix& test_vectors,
                          std::span<const double> thresholds);
EvaluationReport evaluate(const Model& model, const Matrix& test_vectors);

struct SplitEvaluation
{
  ModelConfig config;
  EvaluationReport report;
};

struct MatrixRequest
{
  std::vector<std::vector<std::string>> variable_sets;
  std::vector<int> orders{ 0, 1, 2 };
  std::vector<int> degrees{ 1, 2, 3, 4, 5, 6, 7, 8, 9 };
  Distribution normalizer = Distribution::laplace;
  std::optional<double> prune_sigmas;
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
  std::vector<double> thresholds = default_thresholds();
};

/// Fits on a random training part and reports on the held-out part.
///
/// Times eligible for testing are those with a full context for the
/// largest order in play; normalizers are fitted on training residuals.
EvaluationReport evaluate_split(const ModelConfig& config, const RawSeries& raw,
                                double test_fraction, std::uint64_t seed,
                                std::span<const double> thresholds,
                                const FitOptions& options = {});

/// Every (variables, order, degree) combination on one shared split,
/// returned in that nested order.
std::vector<SplitEvaluation> evaluate_matrix(const RawSeries& raw, const MatrixRequest& request,
                                             const FitOptions& options = {});

} // namespace hcr
