#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "momentcone/multi_index.hpp"

namespace momentcone {

// Sparse real polynomial in n variables. Values are immutable once built; zero
// coefficients are never stored, so the zero polynomial has no terms.
//
// The same type doubles as a finite-support sequence s: ℕⁿ → ℝ, which is how
// the norm and moment code consumes it.
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, double, GradedLex>;

  explicit Polynomial(std::size_t n = 0) : n_(n) {}

  static Polynomial constant(std::size_t n, double c);
  static Polynomial monomial(const MultiIndex& alpha, double c = 1.0);
  /// The coordinate polynomial X_i (0-based i).
  static Polynomial variable(std::size_t n, std::size_t i);
  /// Throws on duplicate exponents or exponents of the wrong length.
  static Polynomial from_terms(std::size_t n,
                               const std::vector<std::pair<MultiIndex, double>>& terms);

  std::size_t dim() const noexcept { return n_; }
  /// max |α| over stored terms; -1 for the zero polynomial.
  int degree() const noexcept;
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  const Terms& terms() const noexcept { return terms_; }
  double coef(const MultiIndex& alpha) const;
  double constant_term() const;
  double max_abs_coefficient() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  friend class TermAccumulator;
  Polynomial(std::size_t n, Terms terms) : n_(n), terms_(std::move(terms)) {}

  std::size_t n_;
  Terms terms_;
};

// Collects contributions to each coefficient and drops a coefficient when
// it cancels to below kCancellationTolerance times the sum of the absolute
// contributions it received.
class TermAccumulator {
 public:
  static constexpr double kCancellationTolerance = 1e-14;

  explicit TermAccumulator(std::size_t n) : n_(n) {}
  void add(const MultiIndex& alpha, double c);
  Polynomial finish() &&;

 private:
  struct Entry {
    double sum = 0.0;
    double abs_sum = 0.0;
  };
  std::size_t n_;
  std::map<MultiIndex, Entry, GradedLex> entries_;
};

Polynomial add(const Polynomial& f, const Polynomial& g);
Polynomial subtract(const Polynomial& f, const Polynomial& g);
Polynomial multiply(const Polynomial& f, const Polynomial& g);
Polynomial scale(const Polynomial& f, double c);

/// Σ f_α x^α with compensated summation in graded-lex term order.
double evaluate(const Polynomial& f, std::span<const double> x);

/// f(c₁X₁, …, cₙXₙ); every cᵢ must be positive.
Polynomial axis_scale(const Polynomial& f, std::span<const double> c);

/// Terms of total degree exactly d.
Polynomial homogeneous_part(const Polynomial& f, int d);

/// Terms of total degree <= d.
Polynomial truncate(const Polynomial& f, int d);

/// Degree-D truncation of the formal power series square root of f.
///
/// Homogeneous components follow g₀ = √f₀ and
/// g_d = (f_d − Σ_{0<j<d} g_j g_{d−j}) / (2g₀), so that g² − f has no terms of
/// degree <= D. Requires f(0) > 0.
Polynomial series_sqrt(const Polynomial& f, int max_degree);

/// ∂f/∂X_i.
Polynomial partial_derivative(const Polynomial& f, std::size_t i);

inline Polynomial operator+(const Polynomial& f, const Polynomial& g) { return add(f, g); }
inline Polynomial operator-(const Polynomial& f, const Polynomial& g) { return subtract(f, g); }
inline Polynomial operator*(const Polynomial& f, const Polynomial& g) { return multiply(f, g); }
inline Polynomial operator*(double c, const Polynomial& f) { return scale(f, c); }
inline Polynomial operator-(const Polynomial& f) { return scale(f, -1.0); }

}  // namespace momentcone
