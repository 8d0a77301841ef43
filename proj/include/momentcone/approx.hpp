#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "momentcone/norms.hpp"
#include "momentcone/polynomial.hpp"

namespace momentcone {

// ---------------------------------------------------------------------------
// Coefficientwise approximation by squares

/// h_i: the degree-i truncation of the power series of √(1/i + f).
/// Requires f(0) >= 0 and i >= 1.
Polynomial sqrt_square_approx(const Polynomial& f, int i);

struct CoefficientwiseStep {
  int i = 0;
  double max_error = 0.0;       ///< max over |α| <= deg f of |coef(h_i², α) − f_α|
  double constant_error = 0.0;  ///< coef(h_i², 0) − f₀
  double off_constant_error = 0.0;  ///< the max restricted to α ≠ 0
};

struct CoefficientwiseReport {
  Polynomial target;
  std::vector<CoefficientwiseStep> steps;
};

CoefficientwiseReport coefficientwise_report(const Polynomial& f, int i_max);

// ---------------------------------------------------------------------------
// Sums of squares

struct SosCertificate {
  Polynomial target;               ///< the polynomial certified as Σ h_k²
  std::vector<Polynomial> factors; ///< the h_k
  Eigen::MatrixXd gram;            ///< over the degree-d graded-lex basis
  double gram_min_eigenvalue = 0.0;
  double residual = 0.0;           ///< max_α |coef(Σ h_k², α) − target_α|
  int degree = 0;
  int iterations = 0;
};

struct SosOptions {
  double tol = 1e-8;
  int max_iters = 5000;
};

// Failure only means the search ran out of iterations; it is not a proof that
// the target lies outside the SOS cone.
struct SosResult {
  std::optional<SosCertificate> certificate;
  double residual = 0.0;  ///< best residual reached
  int iterations = 0;

  bool certified() const noexcept { return certificate.has_value(); }
};

/// Gram-matrix search by alternating projections between the affine set
/// {G : ⟨G, B_α⟩ = f_α} and the PSD cone. Requires deg f <= 2d.
SosResult sos_certify(const Polynomial& f, int d, const SosOptions& options = {});

/// Σ_k h_k².
Polynomial sum_of_squares(std::span<const Polynomial> factors);

// ---------------------------------------------------------------------------
// Approximation of box-nonnegative polynomials in ‖·‖_{p,r}

enum class Perturbation {
  Exponential,  ///< Θ_D = 1 + Σ_i Σ_{k=1..D} X_i^{2k}/k!
  Power,        ///< Θ_D = 1 + Σ_i X_i^{2D}
};

std::string to_string(Perturbation family);

Polynomial perturbation(std::size_t n, int degree, Perturbation family);

struct BoxApproxOptions {
  SosOptions sos{};
  int grid_points = 33;   ///< per axis, for the nonnegativity screen
  int multistarts = 100;
  std::uint64_t seed = 0;
  /// f(x) < −screen_tol·max(1, max|f_α|) on the box rejects the input
  double screen_tol = 1e-9;
};

/// A point of the box where f is negative beyond tolerance, if one is found.
std::optional<std::vector<double>> find_box_violation(const Polynomial& f,
                                                      std::span<const double> half_widths,
                                                      const BoxApproxOptions& options = {});

struct BoxApproxResult {
  bool certified = false;
  double epsilon = 0.0;
  int perturbation_degree = 0;
  Perturbation family = Perturbation::Exponential;
  std::optional<SosCertificate> unit_box_certificate;  ///< for f̃ + εΘ_D
  std::vector<Polynomial> factors;  ///< g̃_k = g_k(X / c), back on the original box
  Polynomial approximant;           ///< Σ g̃_k²
  double distance = 0.0;            ///< ‖f − Σ g̃_k²‖_{p,r}
  double unit_box_distance = 0.0;   ///< ‖f̃ − Σ g_k²‖_p
  double residual = 0.0;
};

/// Scales f to the unit box, perturbs by εΘ_D for D = 2..d_max (exponential
/// family first, then power), certifies the first SOS candidate and maps it
/// back. Throws Error(Domain) when the screen finds f < 0 on the box.
BoxApproxResult box_sos_approx(const Polynomial& f, const WeightSpec& w, double epsilon,
                               int d_max, const BoxApproxOptions& options = {});

struct SweepReport {
  WeightSpec target;
  std::vector<BoxApproxResult> runs;  ///< in schedule order
  bool monotone = true;               ///< certified distances non-increasing
};

/// box_sos_approx along a strictly decreasing ε-schedule. Runs are
/// independent and may execute in parallel.
SweepReport convergence_sweep(const Polynomial& f, const WeightSpec& w,
                              std::span<const double> epsilons, int d_max,
                              const BoxApproxOptions& options = {});

}  // namespace momentcone
