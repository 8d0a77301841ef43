#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "momentcone/multi_index.hpp"
#include "momentcone/norms.hpp"
#include "momentcone/polynomial.hpp"

namespace momentcone {

// Truncated moment sequence s(α) = ℓ(X^α) on the full simplex |α| <= max_degree.
class MomentSequence {
 public:
  /// values[k] is s at basis position k of MonomialBasis(n, max_degree).
  MomentSequence(std::size_t n, int max_degree, std::vector<double> values);
  /// Throws unless every |α| <= max_degree appears exactly once.
  static MomentSequence from_entries(std::size_t n, int max_degree,
                                     const std::vector<std::pair<MultiIndex, double>>& entries);

  std::size_t dim() const noexcept { return basis_->dim(); }
  int max_degree() const noexcept { return basis_->degree(); }
  const MonomialBasis& basis() const noexcept { return *basis_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// s(α); throws when |α| > max_degree.
  double operator()(const MultiIndex& alpha) const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<double> values_;
};

// Symmetric matrix M[α,β] = ℓ(g X^{α+β}) over the degree-d graded-lex basis.
struct MomentMatrix {
  int degree = 0;
  std::vector<MultiIndex> index;
  Eigen::MatrixXd entries;
};

/// ℓ(f) = Σ f_α s(α).
double apply_functional(const MomentSequence& s, const Polynomial& f);

MomentMatrix moment_matrix(const MomentSequence& s, int d);

MomentMatrix localized_moment_matrix(const MomentSequence& s, const Polynomial& g, int d);

double min_eigenvalue(const MomentMatrix& m);

/// 1e-9·|trace|/size, the scale-aware default PSD tolerance.
double default_psd_tolerance(const MomentMatrix& m);

/// True iff the degree-d moment matrix has min eigenvalue >= −tol
/// (tol defaults to default_psd_tolerance when not given).
bool is_psd_functional(const MomentSequence& s, int d, std::optional<double> tol = std::nullopt);

struct GeneratorCheck {
  std::string label;
  Polynomial generator;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct QuadraticModuleReport {
  int degree = 0;
  double archimedean_bound = 0.0;
  std::vector<GeneratorCheck> checks;  // 1, the given generators, then N − Σ X_i²
  bool pass = false;
};

/// Localized PSD checks ℓ(h² g) >= 0 (deg h <= d) for g = 1, each g in
/// generators, and g = N − Σ X_i².
QuadraticModuleReport check_quadratic_module(const MomentSequence& s,
                                             const std::vector<Polynomial>& generators,
                                             double archimedean_bound, int d,
                                             std::optional<double> tol = std::nullopt);

struct DualNormReport {
  double value = 0.0;        ///< norm of the truncated sequence in the dual space of w
  int truncation_degree = 0;
  Exponent q = Exponent::infinity();
  std::vector<double> shells;  ///< per total degree: sup (q = ∞) or Σ|s|^q r′^α
  bool growing = false;        ///< the top shell fails to stay bounded / decay
};

DualNormReport dual_norm_of_moments(const MomentSequence& s, const WeightSpec& w);

}  // namespace momentcone
