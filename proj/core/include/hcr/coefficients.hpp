#pragma once

#include "hcr/basis.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hcr {

/// Sparse map MultiIndex -> coefficient, stored as lexicographic keys.
///
/// A tensor holding every index of its spec is "dense"; pruned or sliced
/// tensors hold a subset. Both share one representation, entries sorted by
/// key. Immutable after construction.
class CoefficientTensor
{
public:
  struct Entry
  {
    std::uint64_t key;
    double value;
  };

  CoefficientTensor() = default;
  /// Dense tensor; values.size() must equal spec.size().
  CoefficientTensor(BasisSpec spec, std::vector<double> values, std::size_t n);
  /// Sparse tensor from entries (any order, duplicate keys rejected).
  CoefficientTensor(BasisSpec spec, std::vector<Entry> entries, std::size_t n);

  /// Tensor holding only a_0 = 1.
  static CoefficientTensor uniform(BasisSpec spec, std::size_t n = 0);

  const BasisSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int degree() const { return spec_.degree; }
  /// Sample size the coefficients were estimated from (0 if unknown).
  std::size_t sample_size() const { return n_; }

  std::size_t entry_count() const { return keys_.size(); }
  bool is_dense() const { return keys_.size() == spec_.size(); }

  std::span<const std::uint64_t> keys() const { return keys_; }
  std::span<const double> values() const { return values_; }
  MultiIndex index_at(std::size_t pos) const { return spec_.decode(keys_[pos]); }

  /// Coefficient for j, or nullopt when the entry is absent.
  std::optional<double> find(const MultiIndex& j) const;
  /// Coefficient for j, zero when absent.
  double at(const MultiIndex& j) const;

private:
  BasisSpec spec_;
  std::vector<std::uint64_t> keys_;
  std::vector<double> values_;
  std::size_t n_ = 0;
};

} // namespace hcr
