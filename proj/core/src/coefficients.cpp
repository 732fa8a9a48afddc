#include "hcr/coefficients.hpp"

#include "hcr/error.hpp"

#include <algorithm>
#include <numeric>

namespace hcr {

CoefficientTensor::CoefficientTensor(BasisSpec spec, std::vector<double> values, std::size_t n)
  : spec_(spec)
  , values_(std::move(values))
  , n_(n)
{
  spec_.validate();
  if (values_.size() != spec_.size())
    throw InvalidInput("dense tensor needs " + std::to_string(spec_.size()) + " values, got " +
                       std::to_string(values_.size()));
  keys_.resize(values_.size());
  std::iota(keys_.begin(), keys_.end(), std::uint64_t{ 0 });
}

CoefficientTensor::CoefficientTensor(BasisSpec spec, std::vector<Entry> entries, std::size_t n)
  : spec_(spec)
  , n_(n)
{
  spec_.validate();
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  const std::uint64_t size = spec_.size();
  keys_.reserve(entries.size());
  values_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].key >= size)
      throw InvalidInput("coefficient index outside the basis");
    if (i > 0 && entries[i].key == entries[i - 1].key)
      throw InvalidInput("duplicate coefficient index");
    keys_.push_back(entries[i].key);
    values_.push_back(entries[i].value);
  }
}

CoefficientTensor
CoefficientTensor::uniform(BasisSpec spec, std::size_t n)
{
  return CoefficientTensor(spec, std::vector<Entry>{ { 0, 1.0 } }, n);
}

std::optional<double>
CoefficientTensor::find(const MultiIndex& j) const
{
  if (!spec_.contains(j))
    return std::nullopt;
  const std::uint64_t key = spec_.encode(j);
  if (is_dense())
    return values_[key];
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key)
    return std::nullopt;
  return values_[static_cast<std::size_t>(it - keys_.begin())];
}

double
CoefficientTensor::at(const MultiIndex& j) const
{
  return find(j).value_or(0.0);
}

} // namespace hcr
