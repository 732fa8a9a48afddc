#include "hcr/basis.hpp"

#include "hcr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace hcr {

double
poly_1d(int j, double x)
{
  if (j < 0)
    throw InvalidInput("polynomial degree must be non-negative");
  if (j == 0)
    return 1.0;
  const double u = 2.0 * x - 1.0;
  double prev = 1.0; // P_0
  double curr = u;   // P_1
  for (int k = 1; k < j; ++k) {
    const double next = ((2.0 * k + 1.0) * u * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return std::sqrt(2.0 * j + 1.0) * curr;
}

void
poly_1d_all(int m, double x, std::span<double> out)
{
  const double u = 2.0 * x - 1.0;
  out[0] = 1.0;
  if (m == 0)
    return;
  double prev = 1.0;
  double curr = u;
  out[1] = std::sqrt(3.0) * u;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0) * u * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
    out[static_cast<std::size_t>(k + 1)] = std::sqrt(2.0 * k + 3.0) * curr;
  }
}

MultiIndex::MultiIndex(std::vector<int> indices) : indices_(std::move(indices))
{
  for (int v : indices_)
    if (v < 0)
      throw InvalidInput("multi-index components must be non-negative");
}

MultiIndex::MultiIndex(std::initializer_list<int> indices)
  : MultiIndex(std::vector<int>(indices))
{}

bool
MultiIndex::is_zero() const
{
  return std::all_of(indices_.begin(), indices_.end(), [](int v) { return v == 0; });
}

int
MultiIndex::max_degree() const
{
  return indices_.empty() ? 0 : *std::max_element(indices_.begin(), indices_.end());
}

void
BasisSpec::validate() const
{
  if (dim < 1)
    throw InvalidInput("basis dimension must be at least 1");
  if (degree < 0)
    throw InvalidInput("basis degree must be non-negative");
  if (size() == UINT64_MAX)
    throw ResourceError("basis size overflows");
}

std::uint64_t
BasisSpec::size() const
{
  const std::uint64_t base = static_cast<std::uint64_t>(degree) + 1;
  std::uint64_t total = 1;
  for (int i = 0; i < dim; ++i) {
    if (total > UINT64_MAX / base)
      return UINT64_MAX;
    total *= base;
  }
  return total;
}

void
BasisSpec::check_cap(std::uint64_t cap) const
{
  validate();
  if (size() > cap)
    throw ResourceError("basis of (" + std::to_string(degree) + "+1)^" + std::to_string(dim) +
                        " functions exceeds the cap of " + std::to_string(cap) +
                        "; lower the degree or use a sparse (pruned) basis");
}

std::uint64_t
BasisSpec::encode(const MultiIndex& j) const
{
  if (!contains(j))
    throw InvalidInput("multi-index does not belong to the basis");
  const std::uint64_t base = static_cast<std::uint64_t>(degree) + 1;
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < j.size(); ++i)
    key = key * base + static_cast<std::uint64_t>(j[i]);
  return key;
}

MultiIndex
BasisSpec::decode(std::uint64_t key) const
{
  const std::uint64_t base = static_cast<std::uint64_t>(degree) + 1;
  std::vector<int> digits(static_cast<std::size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(key % base);
    key /= base;
  }
  return MultiIndex(std::move(digits));
}

bool
BasisSpec::contains(const MultiIndex& j) const
{
  if (j.size() != static_cast<std::size_t>(dim))
    return false;
  for (int v : j.values())
    if (v < 0 || v > degree)
      return false;
  return true;
}

double
product_eval(const MultiIndex& j, std::span<const double> x)
{
  if (j.size() != x.size())
    throw InvalidInput("multi-index has " + std::to_string(j.size()) + " components, point has " +
                       std::to_string(x.size()));
  double value = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (j[i] != 0)
      value *= poly_1d(j[i], x[i]);
  return value;
}

IndexRange::iterator::iterator(int dim, int degree)
  : current_(std::vector<int>(static_cast<std::size_t>(dim), 0))
  , degree_(degree)
  , done_(false)
{}

IndexRange::iterator&
IndexRange::iterator::operator++()
{
  // odometer, last coordinate fastest
  for (std::size_t i = current_.size(); i-- > 0;) {
    if (current_[i] < degree_) {
      ++current_[i];
      return *this;
    }
    current_[i] = 0;
  }
  done_ = true;
  return *this;
}

IndexRange
enumerate_indices(const BasisSpec& spec, std::uint64_t cap)
{
  spec.check_cap(cap);
  return IndexRange(spec);
}

std::string
index_string(const MultiIndex& j, int basis_degree)
{
  std::string out;
  const bool compact = basis_degree <= 9;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!compact && i > 0)
      out += '_';
    out += std::to_string(j[i]);
  }
  return out;
}

MultiIndex
parse_index_string(const std::string& text, int dim)
{
  std::vector<int> digits;
  if (text.find('_') == std::string::npos && text.size() == static_cast<std::size_t>(dim)) {
    for (char ch : text) {
      if (ch < '0' || ch > '9')
        throw InvalidInput("bad multi-index '" + text + "'");
      digits.push_back(ch - '0');
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const std::size_t end = std::min(text.find('_', start), text.size());
      int value = 0;
      const auto* first = text.data() + start;
      const auto* last = text.data() + end;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last || first == last)
        throw InvalidInput("bad multi-index '" + text + "'");
      digits.push_back(value);
      start = end + 1;
    }
  }
  if (digits.size() != static_cast<std::size_t>(dim))
    throw InvalidInput("multi-index '" + text + "' does not have " + std::to_string(dim) +
                       " components");
  return MultiIndex(std::move(digits));
}

} // namespace hcr
