#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "momentcone/polynomial.hpp"

namespace momentcone {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Exponent p ∈ [1, ∞] held exactly: a reduced fraction num/den, or ∞.
class Exponent {
 public:
  static Exponent infinity() { return Exponent(); }
  static Exponent rational(std::int64_t num, std::int64_t den = 1);
  /// Parses "inf", "infinity", an integer, a decimal like "1.5", or "a/b".
  static Exponent parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  /// +∞ for the infinite exponent.
  double value() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  bool infinite_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The conjugate q of p: 1/p + 1/q = 1, with 1 and ∞ paired.
Exponent conjugate_exponent(const Exponent& p);

/// (p, r) selecting the weighted norm ‖s‖_{p,r} = (Σ |s_α|^p r^α)^{1/p}.
struct WeightSpec {
  Exponent p;
  std::vector<double> r;

  /// Throws unless p >= 1 and every r_i > 0.
  WeightSpec(Exponent p, std::vector<double> r);
  /// p with the unit weight r = (1, …, 1).
  static WeightSpec unweighted(Exponent p, std::size_t n);

  std::size_t dim() const noexcept { return r.size(); }
};

/// (q, r′) describing the dual space of ℓ_{p,r}.
struct DualSpec {
  Exponent q;
  std::vector<double> r;

  WeightSpec as_weight() const { return WeightSpec(q, r); }
};

DualSpec dual_weight(const WeightSpec& w);

/// r^α, switching to log space when degree·|log r_i| is large.
double weight_power(std::span<const double> r, const MultiIndex& alpha);

double weighted_norm(const Polynomial& s, const WeightSpec& w);

enum class IsometryDirection { Forward, Inverse };

/// T_{p,r} (forward: s_α ↦ s_α r^{−α/p}) or its inverse. Rejects p = ∞.
Polynomial scaling_isometry(const Polynomial& s, const WeightSpec& w, IsometryDirection dir);

/// Dual-space norm of the evaluation sequence (x^α)_α; +∞ when it diverges.
double eval_sequence_norm(std::span<const double> x, const WeightSpec& w);

/// True iff evaluation at x is bounded in ‖·‖_{p,r}.
bool is_evaluation_continuous(std::span<const double> x, const WeightSpec& w);

struct HolderSides {
  double pointwise_l1;  ///< ‖ab‖₁ with (ab)_α = a_α b_α
  double product_bound; ///< ‖a‖_p ‖b‖_q
};

HolderSides holder_product_norm(const Polynomial& a, const Polynomial& b, const Exponent& p);

/// Half-widths of the box Π[−c_i, c_i] matching w: r_i^{1/p} for p < ∞, r_i for p = ∞.
std::vector<double> box_half_widths(const WeightSpec& w);

}  // namespace momentcone
