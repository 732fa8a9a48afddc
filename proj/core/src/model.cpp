#include "hcr/model.hpp"

#include "hcr/error.hpp"
#include "hcr/random.hpp"

#include <algorithm>
#include <cmath>

namespace hcr {

void
ModelConfig::validate(std::uint64_t cap) const
{
  if (variables.empty())
    throw InvalidInput("model needs at least one variable");
  for (std::size_t i = 0; i < variables.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (variables[i] == variables[k])
        throw InvalidInput("variable '" + variables[i] + "' listed twice");
  if (order < 0)
    throw InvalidInput("model order must be non-negative");
  if (degree < 0)
    throw InvalidInput("model degree must be non-negative");
  if (prune_sigmas && !(*prune_sigmas >= 0.0))
    throw InvalidInput("prune threshold must be non-negative");
  basis().check_cap(cap);
}

std::vector<std::string>
ModelConfig::coordinate_names() const
{
  std::vector<std::string> names;
  for (int lag = 0; lag <= order; ++lag)
    for (const auto& v : variables)
      names.push_back(v + (lag == 0 ? "(t)" : "(t-" + std::to_string(lag) + ")"));
  return names;
}

std::vector<double>
default_thresholds()
{
  std::vector<double> t;
  for (int i = 0; i <= 10; ++i)
    t.push_back(i);
  return t;
}

namespace {

std::vector<Eigen::Index>
column_positions(const std::vector<std::string>& names, std::span<const std::string> variables)
{
  std::vector<Eigen::Index> cols;
  for (const auto& v : variables) {
    auto it = std::find(names.begin(), names.end(), v);
    if (it == names.end())
      throw InvalidInput("unknown variable '" + v + "'");
    cols.push_back(it - names.begin());
  }
  return cols;
}

Matrix
take_rows(const Matrix& m, std::span<const std::size_t> rows)
{
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

CoefficientTensor
estimate_for(const ModelConfig& config, const Matrix& vectors, const FitOptions& options)
{
  CoefficientTensor coeffs =
    estimate(vectors, config.basis(), { options.summation, options.basis_cap });
  if (config.prune_sigmas)
    coeffs = prune(coeffs, vectors, *config.prune_sigmas);
  return coeffs;
}

void
check_thresholds(std::span<const double> thresholds)
{
  if (thresholds.empty())
    throw InvalidInput("at least one threshold is required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!std::isfinite(thresholds[i]))
      throw InvalidInput("thresholds must be finite");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
      throw InvalidInput("thresholds must be strictly increasing");
  }
}

} // namespace

Matrix
build_vectors(const UniformSeries& u, std::span<const std::string> variables, int order)
{
  if (order < 0)
    throw InvalidInput("model order must be non-negative");
  if (variables.empty())
    throw InvalidInput("context vectors need at least one variable");
  const auto cols = column_positions(u.names, variables);
  const Eigen::Index n1 = u.values.rows();
  if (n1 <= order)
    throw InvalidInput("series of " + std::to_string(n1) + " residuals is too short for order " +
                       std::to_string(order));
  const Eigen::Index n = n1 - order;
  const auto nv = static_cast<Eigen::Index>(cols.size());
  Matrix out(n, nv * (order + 1));
  for (Eigen::Index t = 0; t < n; ++t)
    for (int lag = 0; lag <= order; ++lag)
      for (Eigen::Index v = 0; v < nv; ++v)
        out(t, lag * nv + v) = u.values(t + order - lag, cols[static_cast<std::size_t>(v)]);
  return out;
}

Model
fit(const ModelConfig& config, const RawSeries& raw, const FitOptions& options)
{
  config.validate(options.basis_cap);
  const RawSeries selected = raw.select(config.variables);
  const ResidualSeries res = difference_series(selected);
  Model model;
  model.config = config;
  model.normalizers = fit_normalizers(config.normalizer, res);
  const UniformSeries u = normalize_series(res, model.normalizers);
  const Matrix vectors = build_vectors(u, config.variables, config.order);
  model.coeffs = estimate_for(config, vectors, options);
  return model;
}

Matrix
model_vectors(const Model& model, const RawSeries& raw)
{
  const RawSeries selected = raw.select(model.config.variables);
  const ResidualSeries res = difference_series(selected);
  const UniformSeries u = normalize_series(res, model.normalizers);
  return build_vectors(u, model.config.variables, model.config.order);
}

Prediction
predict_density(const Model& model, const RawSeries& recent, bool with_slice)
{
  const auto needed = static_cast<std::size_t>(model.config.order) + 2;
  if (recent.rows() < needed)
    throw InvalidInput("prediction needs " + std::to_string(needed) + " rows of history, got " +
                       std::to_string(recent.rows()));
  const Matrix vectors = model_vectors(model, recent);
  const auto point = row_span(vectors, vectors.rows() - 1);

  Prediction out;
  out.density = evaluate(model.coeffs, point);
  if (with_slice) {
    const int nv = static_cast<int>(model.config.variables.size());
    std::vector<int> ctx;
    for (int c = nv; c < model.coeffs.dim(); ++c)
      ctx.push_back(c);
    const auto ctx_values = point.subspan(static_cast<std::size_t>(nv));
    try {
      out.slice = condition_slice(model.coeffs, ctx, ctx_values, true);
      out.slice_normalized = true;
    } catch (const NonPositiveDensity&) {
      out.slice = condition_slice(model.coeffs, ctx, ctx_values, false);
      out.slice_normalized = false;
    }
  }
  return out;
}

std::size_t
test_size(std::size_t n, double test_fraction)
{
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction + 0.5));
}

Split
split_indices(std::size_t n, double test_fraction, std::uint64_t seed)
{
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw InvalidInput("test fraction must lie in (0, 1)");
  const std::size_t n_test = test_size(n, test_fraction);
  if (n_test == 0 || n_test >= n)
    throw InvalidInput("split of " + std::to_string(n) + " points leaves an empty side");
  Rng rng(seed);
  const auto perm = random_permutation(n, rng);
  Split out;
  out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

std::pair<Matrix, Matrix>
split(const Matrix& data, double test_fraction, std::uint64_t seed)
{
  const Split s = split_indices(static_cast<std::size_t>(data.rows()), test_fraction, seed);
  return { take_rows(data, s.train), take_rows(data, s.test) };
}

EvaluationReport
evaluate(const Model& model, const Matrix& test_vectors, std::span<const double> thresholds)
{
  if (test_vectors.rows() < 1)
    throw InvalidInput("evaluation needs at least one test vector");
  check_thresholds(thresholds);
  EvaluationReport report;
  report.sorted_densities = evaluate_many(model.coeffs, test_vectors);
  std::sort(report.sorted_densities.begin(), report.sorted_densities.end(), std::greater<>());
  const double n = static_cast<double>(report.sorted_densities.size());
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double t : thresholds) {
    const auto above = std::count_if(report.sorted_densities.begin(),
                                     report.sorted_densities.end(), [t](double v) { return v > t; });
    report.threshold_fractions.push_back(static_cast<double>(above) / n);
  }
  const auto non_positive =
    std::count_if(report.sorted_densities.begin(), report.sorted_densities.end(),
                  [](double v) { return !(v > 0.0); });
  report.negative_fraction = static_cast<double>(non_positive) / n;
  report.n_train = model.coeffs.sample_size();
  report.n_test = report.sorted_densities.size();
  return report;
}

EvaluationReport
evaluate(const Model& model, const Matrix& test_vectors)
{
  const auto t = default_thresholds();
  return evaluate(model, test_vectors, t);
}

namespace {

/// One variable set's residuals split at time level, shared across orders.
struct PreparedSplit
{
  std::vector<Normalizer> normalizers;
  UniformSeries uniform;
  std::vector<std::size_t> train_times;
  std::vector<std::size_t> test_times;
};

PreparedSplit
prepare_split(const RawSeries& raw, const std::vector<std::string>& variables, Distribution kind,
              int max_order, double test_fraction, std::uint64_t seed)
{
  const RawSeries selected = raw.select(variables);
  const ResidualSeries res = difference_series(selected);
  const auto first = static_cast<std::size_t>(max_order);
  if (res.rows() <= first)
    throw InvalidInput("series of " + std::to_string(res.rows()) +
                       " residuals is too short for order " + std::to_string(max_order));
  const Split s = split_indices(res.rows() - first, test_fraction, seed);
  PreparedSplit out;
  for (std::size_t i : s.train)
    out.train_times.push_back(i + first);
  for (std::size_t i : s.test)
    out.test_times.push_back(i + first);
  out.normalizers = fit_normalizers(kind, res, out.train_times);
  out.uniform = normalize_series(res, out.normalizers);
  return out;
}

SplitEvaluation
run_split_model(const ModelConfig& config, const PreparedSplit& prepared, std::uint64_t seed,
                std::span<const double> thresholds, const FitOptions& options)
{
  config.validate(options.basis_cap);
  const Matrix vectors = build_vectors(prepared.uniform, config.variables, config.order);
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  const auto shift = static_cast<std::size_t>(config.order);
  for (std::size_t t : prepared.train_times)
    train_rows.push_back(t - shift);
  for (std::size_t t : prepared.test_times)
    test_rows.push_back(t - shift);

  Model model;
  model.config = config;
  model.normalizers = prepared.normalizers;
  model.coeffs = estimate_for(config, take_rows(vectors, train_rows), options);

  SplitEvaluation out;
  out.config = config;
  out.report = evaluate(model, take_rows(vectors, test_rows), thresholds);
  out.report.seed = seed;
  return out;
}

} // namespace

EvaluationReport
evaluate_split(const ModelConfig& config, const RawSeries& raw, double test_fraction,
               std::uint64_t seed, std::span<const double> thresholds, const FitOptions& options)
{
  config.validate(options.basis_cap);
  check_thresholds(thresholds);
  const PreparedSplit prepared = prepare_split(raw, config.variables, config.normalizer,
                                               config.order, test_fraction, seed);
  return run_split_model(config, prepared, seed, thresholds, options).report;
}

std::vector<SplitEvaluation>
evaluate_matrix(const RawSeries& raw, const MatrixRequest& request, const FitOptions& options)
{
  if (request.variable_sets.empty() || request.orders.empty() || request.degrees.empty())
    throw InvalidInput("model matrix needs variable sets, orders and degrees");
  check_thresholds(request.thresholds);
  const int max_order = *std::max_element(request.orders.begin(), request.orders.end());

  // validate every configuration before any fitting
  for (const auto& vars : request.variable_sets)
    for (int order : request.orders)
      for (int degree : request.degrees)
        ModelConfig{ vars, order, degree, request.normalizer, request.prune_sigmas }.validate(
          options.basis_cap);

  std::vector<SplitEvaluation> results;
  for (const auto& vars : request.variable_sets) {
    const PreparedSplit prepared = prepare_split(raw, vars, request.normalizer, max_order,
                                                 request.test_fraction, request.seed);
    for (int order : request.orders)
      for (int degree : request.degrees) {
        const ModelConfig config{ vars, order, degree, request.normalizer, request.prune_sigmas };
        results.push_back(
          run_split_model(config, prepared, request.seed, request.thresholds, options));
      }
  }
  return results;
}

} // namespace hcr
