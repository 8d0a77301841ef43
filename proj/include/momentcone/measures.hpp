#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "momentcone/moments.hpp"
#include "momentcone/norms.hpp"

namespace momentcone {

// Finitely supported positive measure Σ_j w_j δ_{x_j}. Duplicate atoms are
// merged on construction; weights must be nonnegative.
class AtomicMeasure {
 public:
  AtomicMeasure(std::size_t n, std::vector<std::vector<double>> atoms, std::vector<double> weights);

  std::size_t dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<std::vector<double>>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double mass() const noexcept;

 private:
  std::size_t n_;
  std::vector<std::vector<double>> atoms_;
  std::vector<double> weights_;
};

struct BoxSpec {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const noexcept { return lower.size(); }
  bool contains(const std::vector<double>& x, double slack = 0.0) const;
};

/// s(α) = Σ_j w_j x_j^α for |α| <= max_degree.
MomentSequence moments_of_measure(const AtomicMeasure& mu, int max_degree);

/// Π[−r_i, r_i] for p ∈ {1, ∞}, Π[−r_i^{1/p}, r_i^{1/p}] for 1 < p < ∞.
BoxSpec box_from_weight(const WeightSpec& w);

struct RecoveryOptions {
  int grid_points = 51;  ///< per axis, >= 2
  double tol = 1e-6;
  int max_iters = 20000;
};

struct RecoveryResult {
  bool success = false;
  std::optional<AtomicMeasure> measure;  ///< support of the NNLS solution (weights > 1e-10)
  double residual = 0.0;                 ///< ‖A w − s‖₂ in the original moment units
  int iterations = 0;
  BoxSpec box;
};

/// Nonnegative least squares over the uniform grid atoms of K by projected
/// gradient with Barzilai–Borwein steps, followed by a least-squares polish on
/// the active support.
RecoveryResult recover_measure(const MomentSequence& s, const BoxSpec& box,
                               const RecoveryOptions& options = {});

struct RepresentationReport {
  std::vector<double> residuals;  ///< per basis position of s
  double max_residual = 0.0;
  bool atoms_in_box = true;
};

RepresentationReport verify_representation(const MomentSequence& s, const AtomicMeasure& mu,
                                           const std::optional<BoxSpec>& box = std::nullopt);

}  // namespace momentcone
