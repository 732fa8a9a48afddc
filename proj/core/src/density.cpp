#include "hcr/density.hpp"

#include "hcr/error.hpp"
#include "hcr/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hcr {

namespace {

using RowMatrix = Matrix;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutableMap = Eigen::Map<RowMatrix>;

constexpr Eigen::Index kBlockRows = 512;

/// f_0..f_m at every coordinate of x, laid out coordinate-major.
void
factor_table(int degree, std::span<const double> x, std::vector<double>& table)
{
  const std::size_t base = static_cast<std::size_t>(degree) + 1;
  table.resize(x.size() * base);
  for (std::size_t i = 0; i < x.size(); ++i)
    poly_1d_all(degree, x[i], std::span<double>(table.data() + i * base, base));
}

/// Lexicographic outer product of the factor rows of coordinates
/// [first, last) into out, which must hold base^(last-first) values.
void
outer_product(const double* table, std::size_t base, int first, int last, double* out)
{
  out[0] = 1.0;
  std::size_t len = 1;
  for (int c = first; c < last; ++c) {
    const double* f = table + static_cast<std::size_t>(c) * base;
    for (std::size_t p = len; p-- > 0;) {
      const double v = out[p];
      double* dst = out + p * base;
      for (std::size_t k = 0; k < base; ++k)
        dst[k] = v * f[k];
    }
    len *= base;
  }
}

std::size_t
int_pow(std::size_t base, int exp)
{
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i)
    r *= base;
  return r;
}

void
check_sample(const Matrix& sample, const BasisSpec& spec)
{
  if (sample.rows() < 1)
    throw InvalidInput("estimation needs a non-empty sample");
  if (sample.cols() != spec.dim)
    throw InvalidInput("sample has " + std::to_string(sample.cols()) +
                       " columns, basis dimension is " + std::to_string(spec.dim));
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double v = sample.data()[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidInput("sample values must lie in [0, 1]");
  }
}

void
check_point(const CoefficientTensor& coeffs, std::span<const double> x)
{
  if (x.size() != static_cast<std::size_t>(coeffs.dim()))
    throw InvalidInput("point has " + std::to_string(x.size()) + " coordinates, density has " +
                       std::to_string(coeffs.dim()));
}

// Sum over rows [lo, hi) of the full product vector, rows in order.
void
sequential_sum(const Matrix& sample, const BasisSpec& spec, Eigen::Index lo, Eigen::Index hi,
               std::vector<double>& acc)
{
  const std::size_t base = static_cast<std::size_t>(spec.degree) + 1;
  std::vector<double> table;
  std::vector<double> prod(acc.size());
  for (Eigen::Index r = lo; r < hi; ++r) {
    factor_table(spec.degree, row_span(sample, r), table);
    outer_product(table.data(), base, 0, spec.dim, prod.data());
    for (std::size_t j = 0; j < acc.size(); ++j)
      acc[j] += prod[j];
  }
}

void
pairwise_sum(const Matrix& sample, const BasisSpec& spec, Eigen::Index lo, Eigen::Index hi,
             std::vector<double>& acc)
{
  constexpr Eigen::Index leaf = 32;
  if (hi - lo <= leaf) {
    sequential_sum(sample, spec, lo, hi, acc);
    return;
  }
  const Eigen::Index mid = lo + (hi - lo) / 2;
  pairwise_sum(sample, spec, lo, mid, acc);
  std::vector<double> right(acc.size(), 0.0);
  pairwise_sum(sample, spec, mid, hi, right);
  for (std::size_t j = 0; j < acc.size(); ++j)
    acc[j] += right[j];
}

/// Splits coordinates into a prefix of `head` coordinates and the rest, so
/// that the lexicographic coefficient vector is a row-major head x tail matrix.
struct Split
{
  int head;
  std::size_t head_size;
  std::size_t tail_size;
};

Split
split_for(const BasisSpec& spec)
{
  const std::size_t base = static_cast<std::size_t>(spec.degree) + 1;
  const int head = spec.dim / 2;
  return { head, int_pow(base, head), int_pow(base, spec.dim - head) };
}

/// Fills head and tail product rows for sample rows [lo, lo + rows).
/// `square` uses f_j^2 instead of f_j (second moments).
void
fill_factors(const Matrix& sample, const BasisSpec& spec, const Split& split, Eigen::Index lo,
             Eigen::Index rows, bool square, RowMatrix& head, RowMatrix& tail)
{
  const std::size_t base = static_cast<std::size_t>(spec.degree) + 1;
  head.resize(rows, static_cast<Eigen::Index>(split.head_size));
  tail.resize(rows, static_cast<Eigen::Index>(split.tail_size));
  std::vector<double> table;
  for (Eigen::Index t = 0; t < rows; ++t) {
    factor_table(spec.degree, row_span(sample, lo + t), table);
    if (square)
      for (double& v : table)
        v *= v;
    outer_product(table.data(), base, 0, split.head, head.row(t).data());
    outer_product(table.data(), base, split.head, spec.dim, tail.row(t).data());
  }
}

void
blocked_sum(const Matrix& sample, const BasisSpec& spec, bool square, std::vector<double>& acc)
{
  const Split split = split_for(spec);
  MutableMap out(acc.data(), static_cast<Eigen::Index>(split.head_size),
                 static_cast<Eigen::Index>(split.tail_size));
  RowMatrix head;
  RowMatrix tail;
  for (Eigen::Index lo = 0; lo < sample.rows(); lo += kBlockRows) {
    const Eigen::Index rows = std::min(kBlockRows, sample.rows() - lo);
    fill_factors(sample, spec, split, lo, rows, square, head, tail);
    out.noalias() += head.transpose() * tail;
  }
}

/// Digits of every stored key, entry-major.
std::vector<int>
entry_digits(const CoefficientTensor& coeffs)
{
  const std::size_t d = static_cast<std::size_t>(coeffs.dim());
  const std::uint64_t base = static_cast<std::uint64_t>(coeffs.degree()) + 1;
  std::vector<int> digits(coeffs.entry_count() * d);
  for (std::size_t e = 0; e < coeffs.entry_count(); ++e) {
    std::uint64_t key = coeffs.keys()[e];
    for (std::size_t i = d; i-- > 0;) {
      digits[e * d + i] = static_cast<int>(key % base);
      key /= base;
    }
  }
  return digits;
}

double
sparse_value(const CoefficientTensor& coeffs, const std::vector<int>& digits,
             const std::vector<double>& table)
{
  const std::size_t d = static_cast<std::size_t>(coeffs.dim());
  const std::size_t base = static_cast<std::size_t>(coeffs.degree()) + 1;
  const auto values = coeffs.values();
  double total = 0.0;
  for (std::size_t e = 0; e < values.size(); ++e) {
    double term = values[e];
    const int* dig = digits.data() + e * d;
    for (std::size_t i = 0; i < d; ++i)
      term *= table[i * base + static_cast<std::size_t>(dig[i])];
    total += term;
  }
  return total;
}

double
dense_value(const CoefficientTensor& coeffs, const std::vector<double>& table)
{
  // contract the last coordinate first
  const std::size_t base = static_cast<std::size_t>(coeffs.degree()) + 1;
  const auto values = coeffs.values();
  std::vector<double> current(values.begin(), values.end());
  std::size_t len = current.size();
  for (int c = coeffs.dim() - 1; c >= 0; --c) {
    const double* f = table.data() + static_cast<std::size_t>(c) * base;
    len /= base;
    for (std::size_t p = 0; p < len; ++p) {
      double s = 0.0;
      const double* src = current.data() + p * base;
      for (std::size_t k = 0; k < base; ++k)
        s += src[k] * f[k];
      current[p] = s;
    }
  }
  return current[0];
}

void
check_coords(std::span<const int> coords, int dim, const char* what)
{
  std::vector<int> seen;
  for (int c : coords) {
    if (c < 0 || c >= dim)
      throw InvalidInput(std::string(what) + " coordinate " + std::to_string(c) +
                         " outside 0.." + std::to_string(dim - 1));
    if (std::find(seen.begin(), seen.end(), c) != seen.end())
      throw InvalidInput(std::string(what) + " coordinates must be distinct");
    seen.push_back(c);
  }
}

} // namespace

CoefficientTensor
estimate(const Matrix& sample, const BasisSpec& spec, const EstimateOptions& options)
{
  spec.check_cap(options.basis_cap);
  check_sample(sample, spec);
  std::vector<double> acc(spec.size(), 0.0);
  switch (options.summation) {
    case Summation::sequential:
      sequential_sum(sample, spec, 0, sample.rows(), acc);
      break;
    case Summation::pairwise:
      pairwise_sum(sample, spec, 0, sample.rows(), acc);
      break;
    case Summation::blocked:
      blocked_sum(sample, spec, false, acc);
      break;
  }
  const double n = static_cast<double>(sample.rows());
  for (double& v : acc)
    v /= n;
  return CoefficientTensor(spec, std::move(acc), static_cast<std::size_t>(sample.rows()));
}

double
evaluate(const CoefficientTensor& coeffs, std::span<const double> x)
{
  check_point(coeffs, x);
  std::vector<double> table;
  factor_table(coeffs.degree(), x, table);
  if (coeffs.is_dense())
    return dense_value(coeffs, table);
  return sparse_value(coeffs, entry_digits(coeffs), table);
}

std::vector<double>
evaluate_many(const CoefficientTensor& coeffs, const Matrix& points)
{
  if (points.cols() != coeffs.dim())
    throw InvalidInput("points have " + std::to_string(points.cols()) +
                       " coordinates, density has " + std::to_string(coeffs.dim()));
  std::vector<double> out(static_cast<std::size_t>(points.rows()));
  if (!coeffs.is_dense()) {
    const auto digits = entry_digits(coeffs);
    std::vector<double> table;
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
      factor_table(coeffs.degree(), row_span(points, r), table);
      out[static_cast<std::size_t>(r)] = sparse_value(coeffs, digits, table);
    }
    return out;
  }

  const BasisSpec& spec = coeffs.spec();
  const Split split = split_for(spec);
  ConstMap a(coeffs.values().data(), static_cast<Eigen::Index>(split.head_size),
             static_cast<Eigen::Index>(split.tail_size));
  RowMatrix head;
  RowMatrix tail;
  RowMatrix partial;
  for (Eigen::Index lo = 0; lo < points.rows(); lo += kBlockRows) {
    const Eigen::Index rows = std::min(kBlockRows, points.rows() - lo);
    fill_factors(points, spec, split, lo, rows, false, head, tail);
    partial.noalias() = head * a;
    for (Eigen::Index t = 0; t < rows; ++t)
      out[static_cast<std::size_t>(lo + t)] = partial.row(t).dot(tail.row(t));
  }
  return out;
}

double
baseline_sigma(std::size_t n)
{
  if (n == 0)
    throw InvalidInput("noise baseline of an empty sample");
  return 1.0 / std::sqrt(static_cast<double>(n));
}

namespace {

/// First and second sample moments of f_j for the given entry keys.
void
direct_moments(const Matrix& sample, const BasisSpec& spec, std::span<const std::uint64_t> keys,
               std::vector<double>& first, std::vector<double>& second)
{
  const std::size_t d = static_cast<std::size_t>(spec.dim);
  const std::size_t base = static_cast<std::size_t>(spec.degree) + 1;
  std::vector<int> digits(keys.size() * d);
  for (std::size_t e = 0; e < keys.size(); ++e) {
    std::uint64_t key = keys[e];
    for (std::size_t i = d; i-- > 0;) {
      digits[e * d + i] = static_cast<int>(key % base);
      key /= base;
    }
  }
  first.assign(keys.size(), 0.0);
  second.assign(keys.size(), 0.0);
  std::vector<double> table;
  for (Eigen::Index r = 0; r < sample.rows(); ++r) {
    factor_table(spec.degree, row_span(sample, r), table);
    for (std::size_t e = 0; e < keys.size(); ++e) {
      double v = 1.0;
      for (std::size_t i = 0; i < d; ++i)
        v *= table[i * base + static_cast<std::size_t>(digits[e * d + i])];
      first[e] += v;
      second[e] += v * v;
    }
  }
  const double n = static_cast<double>(sample.rows());
  for (std::size_t e = 0; e < keys.size(); ++e) {
    first[e] /= n;
    second[e] /= n;
  }
}

double
sigma_from_moments(double mean, double mean_square, double n)
{
  const double var = std::max(mean_square - mean * mean, 0.0);
  return std::sqrt(var) / std::sqrt(n);
}

} // namespace

NoiseEstimate
sigma(const CoefficientTensor& coeffs, const Matrix& sample)
{
  if (sample.rows() < 2)
    throw InvalidInput("noise estimate needs at least 2 samples");
  check_sample(sample, coeffs.spec());
  const double n = static_cast<double>(sample.rows());
  NoiseEstimate out;
  out.baseline = baseline_sigma(static_cast<std::size_t>(sample.rows()));
  out.sigma.resize(coeffs.entry_count());

  if (coeffs.is_dense()) {
    std::vector<double> first(coeffs.entry_count(), 0.0);
    std::vector<double> second(coeffs.entry_count(), 0.0);
    blocked_sum(sample, coeffs.spec(), false, first);
    blocked_sum(sample, coeffs.spec(), true, second);
    for (std::size_t e = 0; e < first.size(); ++e)
      out.sigma[e] = sigma_from_moments(first[e] / n, second[e] / n, n);
  } else {
    std::vector<double> first;
    std::vector<double> second;
    direct_moments(sample, coeffs.spec(), coeffs.keys(), first, second);
    for (std::size_t e = 0; e < first.size(); ++e)
      out.sigma[e] = sigma_from_moments(first[e], second[e], n);
  }
  // f_0 is constant; its spread is exactly zero
  if (!coeffs.keys().empty() && coeffs.keys()[0] == 0)
    out.sigma[0] = 0.0;
  return out;
}

CoefficientReport
top_k(const CoefficientTensor& coeffs, const Matrix& sample, std::size_t k)
{
  if (k < 1)
    throw InvalidInput("top_k needs k >= 1");
  if (sample.rows() < 2)
    throw InvalidInput("noise estimate needs at least 2 samples");
  check_sample(sample, coeffs.spec());

  const auto keys = coeffs.keys();
  const auto values = coeffs.values();
  std::vector<std::size_t> order;
  order.reserve(keys.size());
  for (std::size_t e = 0; e < keys.size(); ++e)
    if (keys[e] != 0)
      order.push_back(e);
  const std::size_t take = std::min(k, order.size());
  auto by_magnitude = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb)
      return ma > mb;
    return keys[a] < keys[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    by_magnitude);
  order.resize(take);

  std::vector<std::uint64_t> selected;
  selected.reserve(take);
  for (std::size_t e : order)
    selected.push_back(keys[e]);
  std::vector<double> first;
  std::vector<double> second;
  direct_moments(sample, coeffs.spec(), selected, first, second);
  const double n = static_cast<double>(sample.rows());

  CoefficientReport report;
  report.degree = coeffs.degree();
  const MultiIndex zero(std::vector<int>(static_cast<std::size_t>(coeffs.dim()), 0));
  report.rows.push_back({ zero, coeffs.at(zero), 0.0, 0.0 });
  for (std::size_t i = 0; i < order.size(); ++i) {
    CoefficientRow row;
    row.index = coeffs.index_at(order[i]);
    row.value = values[order[i]];
    row.sigma = sigma_from_moments(first[i], second[i], n);
    row.z = row.sigma > 0.0 ? row.value / row.sigma : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

CoefficientTensor
marginalize(const CoefficientTensor& coeffs, std::span<const int> keep)
{
  if (keep.empty())
    throw InvalidInput("marginalization must keep at least one coordinate");
  check_coords(keep, coeffs.dim(), "kept");
  if (!std::is_sorted(keep.begin(), keep.end()))
    throw InvalidInput("kept coordinates must be ascending");

  const BasisSpec out_spec{ static_cast<int>(keep.size()), coeffs.degree() };
  const std::size_t d = static_cast<std::size_t>(coeffs.dim());
  const std::uint64_t base = static_cast<std::uint64_t>(coeffs.degree()) + 1;
  std::vector<bool> kept(d, false);
  for (int c : keep)
    kept[static_cast<std::size_t>(c)] = true;

  std::vector<CoefficientTensor::Entry> entries;
  std::vector<int> digits(d);
  for (std::size_t e = 0; e < coeffs.entry_count(); ++e) {
    std::uint64_t key = coeffs.keys()[e];
    for (std::size_t i = d; i-- > 0;) {
      digits[i] = static_cast<int>(key % base);
      key /= base;
    }
    bool survives = true;
    std::uint64_t out_key = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (kept[i])
        out_key = out_key * base + static_cast<std::uint64_t>(digits[i]);
      else if (digits[i] != 0) {
        survives = false;
        break;
      }
    }
    if (survives)
      entries.push_back({ out_key, coeffs.values()[e] });
  }
  if (entries.size() == out_spec.size()) {
    std::vector<double> dense(entries.size());
    for (const auto& entry : entries)
      dense[entry.key] = entry.value;
    return CoefficientTensor(out_spec, std::move(dense), coeffs.sample_size());
  }
  return CoefficientTensor(out_spec, std::move(entries), coeffs.sample_size());
}

CoefficientTensor
condition_slice(const CoefficientTensor& coeffs, std::span<const int> ctx_coords,
                std::span<const double> ctx_values, bool renormalize)
{
  if (ctx_coords.size() != ctx_values.size())
    throw InvalidInput("context coordinates and values differ in length");
  check_coords(ctx_coords, coeffs.dim(), "context");
  if (ctx_coords.size() >= static_cast<std::size_t>(coeffs.dim()))
    throw InvalidInput("conditioning on every coordinate leaves nothing to slice");
  for (double v : ctx_values)
    if (!(v >= 0.0 && v <= 1.0))
      throw InvalidInput("context values must lie in [0, 1]");

  const std::size_t d = static_cast<std::size_t>(coeffs.dim());
  const std::size_t base = static_cast<std::size_t>(coeffs.degree()) + 1;
  std::vector<int> ctx_pos(d, -1);
  for (std::size_t c = 0; c < ctx_coords.size(); ++c)
    ctx_pos[static_cast<std::size_t>(ctx_coords[c])] = static_cast<int>(c);

  std::vector<double> table;
  factor_table(coeffs.degree(), ctx_values, table);

  const BasisSpec out_spec{ static_cast<int>(d - ctx_coords.size()), coeffs.degree() };
  std::vector<double> acc(out_spec.size(), 0.0);
  std::vector<bool> touched(out_spec.size(), false);
  std::vector<int> digits(d);
  for (std::size_t e = 0; e < coeffs.entry_count(); ++e) {
    std::uint64_t key = coeffs.keys()[e];
    for (std::size_t i = d; i-- > 0;) {
      digits[i] = static_cast<int>(key % base);
      key /= base;
    }
    double weight = coeffs.values()[e];
    std::uint64_t out_key = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (ctx_pos[i] >= 0)
        weight *= table[static_cast<std::size_t>(ctx_pos[i]) * base +
                        static_cast<std::size_t>(digits[i])];
      else
        out_key = out_key * base + static_cast<std::uint64_t>(digits[i]);
    }
    acc[out_key] += weight;
    touched[out_key] = true;
  }

  if (renormalize) {
    // the all-zeros slice coefficient is the context marginal density
    const double context_density = acc[0];
    if (!(context_density > 0.0))
      throw NonPositiveDensity("context marginal density is " + std::to_string(context_density) +
                               "; slice cannot be normalized");
    for (double& v : acc)
      v /= context_density;
  }

  if (coeffs.is_dense())
    return CoefficientTensor(out_spec, std::move(acc), coeffs.sample_size());
  std::vector<CoefficientTensor::Entry> entries;
  for (std::size_t k = 0; k < acc.size(); ++k)
    if (touched[k])
      entries.push_back({ k, acc[k] });
  return CoefficientTensor(out_spec, std::move(entries), coeffs.sample_size());
}

CoefficientTensor
prune(const CoefficientTensor& coeffs, const Matrix& sample, double threshold_sigmas)
{
  if (!(threshold_sigmas >= 0.0))
    throw InvalidInput("prune threshold must be non-negative");
  std::vector<CoefficientTensor::Entry> entries;
  if (std::isinf(threshold_sigmas)) {
    if (auto a0 = coeffs.find(coeffs.spec().decode(0)))
      entries.push_back({ 0, *a0 });
    return CoefficientTensor(coeffs.spec(), std::move(entries), coeffs.sample_size());
  }
  const NoiseEstimate noise = sigma(coeffs, sample);
  for (std::size_t e = 0; e < coeffs.entry_count(); ++e) {
    const double value = coeffs.values()[e];
    if (coeffs.keys()[e] == 0 || !(std::abs(value) < threshold_sigmas * noise.sigma[e]))
      entries.push_back({ coeffs.keys()[e], value });
  }
  return CoefficientTensor(coeffs.spec(), std::move(entries), coeffs.sample_size());
}

RegionStats
region_stats(const CoefficientTensor& coeffs, double threshold, const RegionOptions& options)
{
  if (options.resolution < 2)
    throw InvalidInput("region resolution must be at least 2");
  const int d = coeffs.dim();
  RegionStats stats;
  stats.monte_carlo = d > 3;

  std::uint64_t total_points;
  if (stats.monte_carlo) {
    if (options.mc_samples == 0)
      throw InvalidInput("Monte Carlo region statistics need at least one sample");
    total_points = options.mc_samples;
  } else {
    total_points = int_pow(static_cast<std::size_t>(options.resolution), d);
  }

  Rng rng(options.seed);
  const auto r = static_cast<std::uint64_t>(options.resolution);
  constexpr std::uint64_t chunk = 16384;
  Matrix points;
  std::uint64_t above = 0;
  double mass_above = 0.0;
  double mass_total = 0.0;
  for (std::uint64_t start = 0; start < total_points; start += chunk) {
    const std::uint64_t count = std::min(chunk, total_points - start);
    points.resize(static_cast<Eigen::Index>(count), d);
    for (std::uint64_t p = 0; p < count; ++p) {
      const auto row = static_cast<Eigen::Index>(p);
      if (stats.monte_carlo) {
        for (int c = 0; c < d; ++c)
          points(row, c) = uniform01(rng);
      } else {
        std::uint64_t cell = start + p;
        for (int c = d - 1; c >= 0; --c) {
          points(row, c) = (static_cast<double>(cell % r) + 0.5) / static_cast<double>(r);
          cell /= r;
        }
      }
    }
    const auto rho = evaluate_many(coeffs, points);
    for (double v : rho) {
      const double positive = std::max(v, 0.0);
      mass_total += positive;
      if (v > threshold) {
        ++above;
        mass_above += positive;
      }
    }
  }
  stats.evaluations = total_points;
  stats.volume_fraction = static_cast<double>(above) / static_cast<double>(total_points);
  stats.mass_fraction = mass_total > 0.0 ? mass_above / mass_total : 0.0;
  return stats;
}

} // namespace hcr
