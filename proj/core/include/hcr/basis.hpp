#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace hcr {

/// Default upper bound on (m+1)^d accepted by dense operations.
inline constexpr std::uint64_t kDefaultBasisCap = 10'000'000;

/// Orthonormal shifted Legendre polynomial of degree j on [0, 1]:
/// sqrt(2j+1) * P_j(2x-1), evaluated by the three-term recurrence.
double poly_1d(int j, double x);

/// Writes f_0(x) .. f_m(x) into out (size m+1).
void poly_1d_all(int m, double x, std::span<double> out);

/// d-tuple of per-coordinate degrees.
class MultiIndex
{
public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> indices);
  MultiIndex(std::initializer_list<int> indices);

  std::size_t size() const { return indices_.size(); }
  int operator[](std::size_t i) const { return indices_[i]; }
  int& operator[](std::size_t i) { return indices_[i]; }
  std::span<const int> values() const { return indices_; }
  bool is_zero() const;
  int max_degree() const;

  auto operator<=>(const MultiIndex&) const = default;

private:
  std::vector<int> indices_;
};

/// Dimension and per-coordinate maximum degree of a tensor basis.
struct BasisSpec
{
  int dim = 1;
  int degree = 0;

  /// Throws InvalidInput for dim < 1 or degree < 0 or overflowing size.
  void validate() const;
  /// (degree + 1)^dim, saturating at UINT64_MAX.
  std::uint64_t size() const;
  /// Throws ResourceError if size() exceeds cap.
  void check_cap(std::uint64_t cap = kDefaultBasisCap) const;

  /// Lexicographic rank (first coordinate most significant).
  std::uint64_t encode(const MultiIndex& j) const;
  MultiIndex decode(std::uint64_t key) const;
  bool contains(const MultiIndex& j) const;

  bool operator==(const BasisSpec&) const = default;
};

/// f_{j_1}(x_1) * ... * f_{j_d}(x_d).
double product_eval(const MultiIndex& j, std::span<const double> x);

/// Lexicographic range over all multi-indices of a spec, starting at zeros.
class IndexRange
{
public:
  class iterator
  {
  public:
    using value_type = MultiIndex;
    using difference_type = std::ptrdiff_t;
    using reference = const MultiIndex&;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    reference operator*() const { return current_; }
    const MultiIndex* operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int)
    {
      auto copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(std::default_sentinel_t) const { return done_; }
    bool operator==(const iterator& other) const
    {
      return done_ == other.done_ && (done_ || current_ == other.current_);
    }

  private:
    friend class IndexRange;
    iterator(int dim, int degree);

    MultiIndex current_;
    int degree_ = 0;
    bool done_ = true;
  };

  explicit IndexRange(BasisSpec spec) : spec_(spec) {}
  iterator begin() const { return iterator(spec_.dim, spec_.degree); }
  std::default_sentinel_t end() const { return {}; }
  std::uint64_t size() const { return spec_.size(); }

private:
  BasisSpec spec_;
};

/// Validates the spec against the cap and returns the lexicographic range.
IndexRange enumerate_indices(const BasisSpec& spec, std::uint64_t cap = kDefaultBasisCap);

/// Compact digits ("110") when the basis degree is at most 9, else
/// underscore-separated ("0_10_3").
std::string index_string(const MultiIndex& j, int basis_degree);
/// Inverse of index_string for the given dimension.
MultiIndex parse_index_string(const std::string& text, int dim);

} // namespace hcr
