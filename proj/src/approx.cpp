#include "momentcone/approx.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "momentcone/error.hpp"
#include "momentcone/linalg.hpp"
#include "momentcone/multi_index.hpp"
#include "momentcone/parallel.hpp"

namespace momentcone {

// ---------------------------------------------------------------------------
// Coefficientwise approximation

Polynomial sqrt_square_approx(const Polynomial& f, int i) {
  if (i < 1) throw Error(ErrorCode::InvalidArgument, "approximation index must be >= 1");
  if (f.constant_term() < 0.0) {
    throw Error(ErrorCode::Domain,
                "f(0) < 0: f is not a coefficientwise limit of squares");
  }
  const Polynomial shifted = add(f, Polynomial::constant(f.dim(), 1.0 / i));
  return series_sqrt(shifted, i);
}

CoefficientwiseReport coefficientwise_report(const Polynomial& f, int i_max) {
  if (i_max < 1) throw Error(ErrorCode::InvalidArgument, "i_max must be >= 1");
  CoefficientwiseReport report{f, {}};
  const MonomialBasis basis(f.dim(), std::max(f.degree(), 0));
  for (int i = 1; i <= i_max; ++i) {
    const Polynomial h = sqrt_square_approx(f, i);
    const Polynomial h2 = multiply(h, h);
    CoefficientwiseStep step;
    step.i = i;
    for (const auto& alpha : basis.monomials()) {
      const double diff = h2.coef(alpha) - f.coef(alpha);
      if (alpha.total_degree() == 0) {
        step.constant_error = diff;
      } else {
        step.off_constant_error = std::max(step.off_constant_error, std::abs(diff));
      }
      step.max_error = std::max(step.max_error, std::abs(diff));
    }
    report.steps.push_back(step);
  }
  return report;
}

// ---------------------------------------------------------------------------
// SOS certification

Polynomial sum_of_squares(std::span<const Polynomial> factors) {
  if (factors.empty()) return Polynomial(0);
  TermAccumulator acc(factors.front().dim());
  for (const auto& h : factors) {
    for (const auto& [a, ca] : h.terms()) {
      for (const auto& [b, cb] : h.terms()) acc.add(a + b, ca * cb);
    }
  }
  return std::move(acc).finish();
}

namespace {

// Gram entries grouped by the monomial b_i + b_j they multiply to.
//
// A basis monomial b is dropped when X^{2b} has a zero coefficient and can only
// arise as b·b among the kept monomials: such a diagonal entry is forced to 0,
// so its whole row vanishes in every PSD Gram matrix.
struct GramStructure {
  int degree;
  std::vector<MultiIndex> monomials;
  std::vector<Eigen::Index> positions;  // of the kept monomials in the full basis
  Eigen::Index full_size = 0;
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> classes;
  std::vector<double> target;

  GramStructure(const Polynomial& f, int d) : degree(d) {
    const MonomialBasis full(f.dim(), d);
    const MonomialBasis products(f.dim(), 2 * d);
    std::vector<double> coef(products.size(), 0.0);
    for (const auto& [alpha, c] : f.terms()) {
      const auto k = products.index_of(alpha);
      if (k == products.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "polynomial degree exceeds twice the Gram basis degree");
      }
      coef[k] = c;
    }

    std::vector<bool> kept(full.size(), true);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t b = 0; b < full.size(); ++b) {
        if (!kept[b]) continue;
        const auto k = products.index_of(full[b] + full[b]);
        if (coef[k] != 0.0) continue;
        bool alone = true;
        for (std::size_t i = 0; i < full.size() && alone; ++i) {
          if (!kept[i] || i == b) continue;
          for (std::size_t j = 0; j < full.size(); ++j) {
            if (kept[j] && products.index_of(full[i] + full[j]) == k) {
              alone = false;
              break;
            }
          }
        }
        if (alone) {
          kept[b] = false;
          changed = true;
        }
      }
    }
    full_size = static_cast<Eigen::Index>(full.size());
    for (std::size_t b = 0; b < full.size(); ++b) {
      if (!kept[b]) continue;
      monomials.push_back(full[b]);
      positions.push_back(static_cast<Eigen::Index>(b));
    }

    classes.resize(products.size());
    target = std::move(coef);
    const auto m = static_cast<Eigen::Index>(monomials.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const auto k = products.index_of(monomials[static_cast<std::size_t>(i)] +
                                         monomials[static_cast<std::size_t>(j)]);
        classes[k].emplace_back(i, j);
      }
    }
  }

  void project_affine(Eigen::MatrixXd& g) const {
    for (std::size_t k = 0; k < classes.size(); ++k) {
      if (classes[k].empty()) continue;
      double sum = 0.0;
      for (const auto& [i, j] : classes[k]) sum += g(i, j);
      const double shift = (target[k] - sum) / static_cast<double>(classes[k].size());
      for (const auto& [i, j] : classes[k]) g(i, j) += shift;
    }
  }

  double coefficient_residual(const Eigen::MatrixXd& g) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k) {
      double sum = 0.0;
      for (const auto& [i, j] : classes[k]) sum += g(i, j);
      worst = std::max(worst, std::abs(sum - target[k]));
    }
    return worst;
  }
};

std::vector<Polynomial> gram_factors(const SymmetricEigen& eig, std::size_t n,
                                     const std::vector<MultiIndex>& basis) {
  std::vector<Polynomial> factors;
  for (Eigen::Index k = eig.values.size(); k-- > 0;) {
    const double lambda = eig.values[k];
    if (!(lambda > 0.0)) continue;
    TermAccumulator acc(n);
    const double root = std::sqrt(lambda);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      acc.add(basis[i], root * eig.vectors(static_cast<Eigen::Index>(i), k));
    }
    Polynomial h = std::move(acc).finish();
    if (!h.is_zero()) factors.push_back(std::move(h));
  }
  return factors;
}

std::optional<SosCertificate> try_certificate(const Polynomial& f, const GramStructure& gs,
                                              const Eigen::MatrixXd& gram,
                                              const SymmetricEigen& eig, double tol,
                                              int iteration) {
  SosCertificate cert;
  cert.target = f;
  cert.factors = gram_factors(eig, f.dim(), gs.monomials);
  const Polynomial sos = sum_of_squares(cert.factors);
  double residual = 0.0;
  for (const auto& [alpha, c] : f.terms()) residual = std::max(residual, std::abs(sos.coef(alpha) - c));
  for (const auto& [alpha, c] : sos.terms()) {
    if (f.coef(alpha) == 0.0) residual = std::max(residual, std::abs(c));
  }
  if (!(residual <= tol)) return std::nullopt;
  cert.gram = Eigen::MatrixXd::Zero(gs.full_size, gs.full_size);
  for (std::size_t i = 0; i < gs.positions.size(); ++i) {
    for (std::size_t j = 0; j < gs.positions.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      cert.gram(gs.positions[i], gs.positions[j]) = 0.5 * (gram(a, b) + gram(b, a));
    }
  }
  cert.gram_min_eigenvalue = eig.values.size() ? eig.values[0] : 0.0;
  // dropped monomials contribute zero rows
  if (static_cast<Eigen::Index>(gs.positions.size()) < gs.full_size) {
    cert.gram_min_eigenvalue = std::min(cert.gram_min_eigenvalue, 0.0);
  }
  cert.residual = residual;
  cert.degree = gs.degree;
  cert.iterations = iteration;
  return cert;
}

}  // namespace

SosResult sos_certify(const Polynomial& f, int d, const SosOptions& options) {
  if (d < 0) throw Error(ErrorCode::InvalidArgument, "Gram degree must be nonnegative");
  if (f.degree() > 2 * d) {
    throw Error(ErrorCode::InvalidArgument, "deg f exceeds 2d");
  }
  if (!(options.tol > 0.0) || options.max_iters < 1) {
    throw Error(ErrorCode::InvalidArgument, "tolerance and iteration cap must be positive");
  }
  const GramStructure gs(f, d);
  const auto m = static_cast<Eigen::Index>(gs.monomials.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);

  // PSD step: clip eigenvalues at a floor that shrinks every kFloorPeriod
  // iterations and drops to zero for the second half of the budget.
  constexpr int kFloorPeriod = 500;
  double floor = 1e-4 * std::max(1.0, f.max_abs_coefficient());

  SosResult result;
  result.residual = kInfinity;
  if (m == 0) {
    const SymmetricEigen empty = jacobi_eigen(g);
    if (auto cert = try_certificate(f, gs, g, empty, options.tol, 0)) {
      result.residual = cert->residual;
      result.certificate = std::move(cert);
    } else {
      result.residual = gs.coefficient_residual(g);
    }
    return result;
  }
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    gs.project_affine(g);
    const SymmetricEigen eig = jacobi_eigen(g);
    result.iterations = iter;
    if (eig.values[0] >= -options.tol) {
      if (auto cert = try_certificate(f, gs, g, eig, options.tol, iter)) {
        result.residual = cert->residual;
        result.certificate = std::move(cert);
        return result;
      }
    }
    const Eigen::MatrixXd psd = clip_spectrum(eig, 0.0);
    const double residual = gs.coefficient_residual(psd);
    result.residual = std::min(result.residual, residual);
    if (residual <= options.tol) {
      const SymmetricEigen psd_eig = jacobi_eigen(psd);
      if (auto cert = try_certificate(f, gs, psd, psd_eig, options.tol, iter)) {
        result.residual = cert->residual;
        result.certificate = std::move(cert);
        return result;
      }
    }
    if (iter % kFloorPeriod == 0) floor = iter >= options.max_iters / 2 ? 0.0 : floor * 0.1;
    g = clip_spectrum(eig, floor);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Box approximation

std::string to_string(Perturbation family) {
  return family == Perturbation::Exponential ? "exponential" : "power";
}

Polynomial perturbation(std::size_t n, int degree, Perturbation family) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "perturbation degree must be >= 1");
  TermAccumulator acc(n);
  acc.add(MultiIndex(n), 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (family == Perturbation::Power) {
      std::vector<std::uint32_t> e(n, 0);
      e[i] = static_cast<std::uint32_t>(2 * degree);
      acc.add(MultiIndex(std::move(e)), 1.0);
      continue;
    }
    double factorial = 1.0;
    for (int k = 1; k <= degree; ++k) {
      factorial *= k;
      std::vector<std::uint32_t> e(n, 0);
      e[i] = static_cast<std::uint32_t>(2 * k);
      acc.add(MultiIndex(std::move(e)), 1.0 / factorial);
    }
  }
  return std::move(acc).finish();
}

namespace {

double clamp_to_box(double v, double c) { return std::clamp(v, -c, c); }

// Projected gradient descent with backtracking from a start point.
std::vector<double> local_minimize(const Polynomial& f, const std::vector<Polynomial>& grad,
                                   std::span<const double> half_widths, std::vector<double> x) {
  double fx = evaluate(f, x);
  double step = 0.1 * *std::max_element(half_widths.begin(), half_widths.end());
  std::vector<double> trial(x.size());
  for (int it = 0; it < 200 && step > 1e-14; ++it) {
    std::vector<double> gvec(x.size());
    double gnorm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      gvec[i] = evaluate(grad[i], x);
      gnorm += gvec[i] * gvec[i];
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) break;
    bool moved = false;
    while (step > 1e-14) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        trial[i] = clamp_to_box(x[i] - step * gvec[i] / gnorm, half_widths[i]);
      }
      const double ft = evaluate(f, trial);
      if (ft < fx) {
        x = trial;
        fx = ft;
        step *= 2.0;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace

std::optional<std::vector<double>> find_box_violation(const Polynomial& f,
                                                      std::span<const double> half_widths,
                                                      const BoxApproxOptions& options) {
  const std::size_t n = f.dim();
  if (half_widths.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "box and polynomial dimensions differ");
  }
  const double threshold = -options.screen_tol * std::max(1.0, f.max_abs_coefficient());
  const int m = std::max(options.grid_points, 2);

  // grid scan
  std::vector<std::size_t> counter(n, 0);
  std::vector<double> x(n);
  std::vector<double> best_x(n);
  double best = kInfinity;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = -half_widths[i] + 2.0 * half_widths[i] * static_cast<double>(counter[i]) / (m - 1);
    }
    const double v = evaluate(f, x);
    if (v < best) {
      best = v;
      best_x = x;
    }
    std::size_t axis = 0;
    while (axis < n && ++counter[axis] == static_cast<std::size_t>(m)) counter[axis++] = 0;
    if (axis == n) break;
  }
  if (best < threshold) return best_x;

  std::vector<Polynomial> grad;
  for (std::size_t i = 0; i < n; ++i) grad.push_back(partial_derivative(f, i));
  std::mt19937_64 rng(options.seed);
  for (int start = 0; start < options.multistarts; ++start) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> u(-half_widths[i], half_widths[i]);
      x[i] = u(rng);
    }
    auto local = local_minimize(f, grad, half_widths, x);
    if (evaluate(f, local) < threshold) return local;
  }
  return std::nullopt;
}

namespace {

BoxApproxResult approximate_on_box(const Polynomial& f, const WeightSpec& w, double epsilon,
                                   int d_max, const BoxApproxOptions& options) {
  const std::size_t n = f.dim();
  const std::vector<double> c = box_half_widths(w);
  std::vector<double> c_inv(c.size());
  std::transform(c.begin(), c.end(), c_inv.begin(), [](double v) { return 1.0 / v; });
  const Polynomial unit = axis_scale(f, c);
  const WeightSpec unweighted = WeightSpec::unweighted(w.p, n);

  BoxApproxResult result;
  result.epsilon = epsilon;
  result.residual = kInfinity;
  for (int D = 2; D <= d_max; ++D) {
    for (Perturbation family : {Perturbation::Exponential, Perturbation::Power}) {
      const Polynomial candidate = add(unit, scale(perturbation(n, D, family), epsilon));
      const int gram_degree = std::max(D, (std::max(candidate.degree(), 0) + 1) / 2);
      SosResult sos = sos_certify(candidate, gram_degree, options.sos);
      result.residual = std::min(result.residual, sos.residual);
      result.perturbation_degree = D;
      result.family = family;
      if (!sos.certified()) continue;

      result.certified = true;
      result.residual = sos.certificate->residual;
      for (const auto& g : sos.certificate->factors) result.factors.push_back(axis_scale(g, c_inv));
      result.approximant = sum_of_squares(result.factors);
      result.distance = weighted_norm(subtract(f, result.approximant), w);
      result.unit_box_distance =
          weighted_norm(subtract(unit, sum_of_squares(sos.certificate->factors)), unweighted);
      result.unit_box_certificate = std::move(sos.certificate);
      return result;
    }
  }
  return result;
}

}  // namespace

BoxApproxResult box_sos_approx(const Polynomial& f, const WeightSpec& w, double epsilon,
                               int d_max, const BoxApproxOptions& options) {
  if (f.dim() != w.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial and weight dimensions differ");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a nonnegative real");
  }
  if (d_max < 2) throw Error(ErrorCode::InvalidArgument, "d_max must be >= 2");
  if (auto bad = find_box_violation(f, box_half_widths(w), options)) {
    std::string where;
    for (double v : *bad) where += (where.empty() ? "" : ", ") + std::to_string(v);
    throw Error(ErrorCode::Domain, "f is negative on the box at (" + where + ")");
  }
  return approximate_on_box(f, w, epsilon, d_max, options);
}

SweepReport convergence_sweep(const Polynomial& f, const WeightSpec& w,
                              std::span<const double> epsilons, int d_max,
                              const BoxApproxOptions& options) {
  for (std::size_t k = 1; k < epsilons.size(); ++k) {
    if (!(epsilons[k] < epsilons[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "epsilon schedule must be strictly decreasing");
    }
  }
  // screen once, then fan out
  if (epsilons.empty()) return SweepReport{w, {}, true};
  BoxApproxResult first = box_sos_approx(f, w, epsilons[0], d_max, options);
  SweepReport report{w, std::vector<BoxApproxResult>(epsilons.size()), true};
  report.runs[0] = std::move(first);
  parallel_for(epsilons.size() - 1, [&](std::size_t k) {
    report.runs[k + 1] = approximate_on_box(f, w, epsilons[k + 1], d_max, options);
  });
  double previous = kInfinity;
  for (const auto& run : report.runs) {
    if (!run.certified) continue;
    if (run.distance > previous + 1e-9 * std::max(1.0, previous)) report.monotone = false;
    previous = run.distance;
  }
  return report;
}

}  // namespace momentcone
