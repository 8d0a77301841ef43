#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace momentcone {

/// Exponent vector α ∈ ℕⁿ of a monomial X^α.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : exps_(n, 0) {}
  explicit MultiIndex(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}
  MultiIndex(std::initializer_list<std::uint32_t> exps) : exps_(exps) {}

  /// The unit vector e_i in dimension n.
  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t dim() const noexcept { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::span<const std::uint32_t> exponents() const noexcept { return exps_; }
  std::uint32_t total_degree() const noexcept;

  MultiIndex operator+(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  /// Readable form, e.g. "x1^2*x3"; "1" for the zero index.
  std::string to_string() const;

 private:
  std::vector<std::uint32_t> exps_;
};

// Graded lexicographic order: total degree first, then the larger exponent of
// X1 (then X2, ...) comes first. For n=2 the basis reads 1, x1, x2, x1^2,
// x1*x2, x2^2, ...
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All α with |α| <= degree in graded-lex order, with a reverse lookup.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t n, int degree);

  std::size_t dim() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return monomials_[k]; }
  const std::vector<MultiIndex>& monomials() const noexcept { return monomials_; }

  /// Position of α, or size() when |α| exceeds the degree.
  std::size_t index_of(const MultiIndex& alpha) const;

 private:
  std::size_t n_;
  int degree_;
  std::vector<MultiIndex> monomials_;
  std::map<MultiIndex, std::size_t, GradedLex> index_;
};

/// C(n+d, n), the number of monomials of degree <= d in n variables.
std::size_t simplex_size(std::size_t n, int d);

}  // namespace momentcone
