#include "momentcone/measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Dense>

#include "momentcone/error.hpp"
#include "momentcone/linalg.hpp"
#include "momentcone/parallel.hpp"

namespace momentcone {

namespace {

double monomial_at(const MultiIndex& alpha, const std::vector<double>& x) {
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (alpha[i] != 0) v *= std::pow(x[i], static_cast<double>(alpha[i]));
  }
  return v;
}

constexpr double kSupportThreshold = 1e-10;

}  // namespace

AtomicMeasure::AtomicMeasure(std::size_t n, std::vector<std::vector<double>> atoms,
                             std::vector<double> weights)
    : n_(n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "measure dimension must be positive");
  if (atoms.size() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "atoms and weights differ in length");
  }
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "atom has the wrong number of coordinates");
    }
    for (double v : atoms[j]) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite atom coordinate");
    }
    if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
      throw Error(ErrorCode::Domain, "measure weights must be nonnegative and finite");
    }
    auto it = std::find(atoms_.begin(), atoms_.end(), atoms[j]);
    if (it != atoms_.end()) {
      weights_[static_cast<std::size_t>(it - atoms_.begin())] += weights[j];
    } else {
      atoms_.push_back(std::move(atoms[j]));
      weights_.push_back(weights[j]);
    }
  }
}

double AtomicMeasure::mass() const noexcept {
  double m = 0.0;
  for (double w : weights_) m += w;
  return m;
}

bool BoxSpec::contains(const std::vector<double>& x, double slack) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  }
  return true;
}

MomentSequence moments_of_measure(const AtomicMeasure& mu, int max_degree) {
  if (max_degree < 0) throw Error(ErrorCode::InvalidArgument, "max_degree must be >= 0");
  const MonomialBasis basis(mu.dim(), max_degree);
  std::vector<double> values(basis.size(), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      values[k] += mu.weights()[j] * monomial_at(basis[k], mu.atoms()[j]);
    }
  }
  return MomentSequence(mu.dim(), max_degree, std::move(values));
}

BoxSpec box_from_weight(const WeightSpec& w) {
  BoxSpec box;
  for (double c : box_half_widths(w)) {
    box.lower.push_back(-c);
    box.upper.push_back(c);
  }
  return box;
}

namespace {

struct GridProblem {
  std::vector<std::vector<double>> atoms;
  Eigen::MatrixXd scaled;   // rows divided by ρ^α
  Eigen::VectorXd target;   // s(α)/ρ^α
  Eigen::VectorXd row_scale;  // ρ^α
};

GridProblem assemble(const MomentSequence& s, const BoxSpec& box, int m) {
  const std::size_t n = s.dim();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= static_cast<std::size_t>(m);

  GridProblem gp;
  gp.atoms.resize(count, std::vector<double>(n));
  for (std::size_t j = 0; j < count; ++j) {
    std::size_t rem = j;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = rem % static_cast<std::size_t>(m);
      rem /= static_cast<std::size_t>(m);
      gp.atoms[j][i] = k + 1 == static_cast<std::size_t>(m)
                           ? box.upper[i]
                           : box.lower[i] + (box.upper[i] - box.lower[i]) *
                                                static_cast<double>(k) / (m - 1);
    }
  }

  const auto& basis = s.basis();
  const auto rows = static_cast<Eigen::Index>(basis.size());
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = std::max({std::abs(box.lower[i]), std::abs(box.upper[i]), 1e-300});
  }
  gp.row_scale.resize(rows);
  gp.target.resize(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    gp.row_scale[k] = monomial_at(basis[static_cast<std::size_t>(k)], rho);
    gp.target[k] = s.values()[static_cast<std::size_t>(k)] / gp.row_scale[k];
  }
  gp.scaled.resize(rows, static_cast<Eigen::Index>(count));
  parallel_for(count, [&](std::size_t j) {
    for (Eigen::Index k = 0; k < rows; ++k) {
      gp.scaled(k, static_cast<Eigen::Index>(j)) =
          monomial_at(basis[static_cast<std::size_t>(k)], gp.atoms[j]) / gp.row_scale[k];
    }
  });
  return gp;
}

double original_residual(const GridProblem& gp, const Eigen::VectorXd& w) {
  const Eigen::VectorXd r = gp.scaled * w - gp.target;
  return r.cwiseProduct(gp.row_scale).norm();
}

// Least squares on the support {w_j > cutoff}; kept only if nonnegative.
std::optional<Eigen::VectorXd> polish(const GridProblem& gp, const Eigen::VectorXd& w,
                                      double cutoff) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w[j] > cutoff) support.push_back(j);
  }
  if (support.empty()) return std::nullopt;
  Eigen::MatrixXd sub(gp.scaled.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    sub.col(static_cast<Eigen::Index>(c)) = gp.scaled.col(support[c]);
  }
  const Eigen::VectorXd v = sub.completeOrthogonalDecomposition().solve(gp.target);
  if (!v.allFinite() || v.minCoeff() < 0.0) return std::nullopt;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
  for (std::size_t c = 0; c < support.size(); ++c) out[support[c]] = v[static_cast<Eigen::Index>(c)];
  return out;
}

// Lawson–Hanson active-set NNLS on the scaled system.
Eigen::VectorXd active_set_nnls(const GridProblem& gp, int max_iters) {
  const Eigen::MatrixXd& a = gp.scaled;
  const Eigen::Index cols = a.cols();
  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 10.0 * eps * a.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(a.rows(), cols));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    const Eigen::VectorXd v = sub.completeOrthogonalDecomposition().solve(gp.target);
    z = Eigen::VectorXd::Zero(cols);
    for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = v[static_cast<Eigen::Index>(c)];
  };

  for (int outer = 0; outer < max_iters; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (gp.target - a * x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > tol && (best < 0 || w[j] > w[best])) best = j;
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd z;
    for (int inner = 0; inner <= cols; ++inner) {
      solve_passive(z);
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          feasible = false;
          const double denom = x[j] - z[j];
          if (denom > 0.0) alpha = std::min(alpha, x[j] / denom);
        }
      }
      if (feasible) break;
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
      }
    }
    x = z.cwiseMax(0.0);
  }
  return x;
}

}  // namespace

RecoveryResult recover_measure(const MomentSequence& s, const BoxSpec& box,
                               const RecoveryOptions& options) {
  if (box.dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "box and moment dimensions differ");
  }
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (!(box.lower[i] < box.upper[i])) throw Error(ErrorCode::InvalidArgument, "empty box");
  }
  if (options.grid_points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs >= 2 points per axis");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  const GridProblem gp = assemble(s, box, options.grid_points);
  const Eigen::Index cols = gp.scaled.cols();

  // Lipschitz constant of the gradient: λ_max(ÂÂᵀ), a small rows×rows matrix
  const Eigen::MatrixXd gram = gp.scaled * gp.scaled.transpose();
  const double lipschitz = std::max(jacobi_eigen(gram).values.maxCoeff(), 1e-300);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd r = -gp.target;
  Eigen::VectorXd grad = gp.scaled.transpose() * r;
  double objective = 0.5 * r.squaredNorm();
  double step = 1.0 / lipschitz;
  std::deque<double> history{objective};
  constexpr std::size_t kMemory = 10;

  Eigen::VectorXd best = w;
  double best_residual = original_residual(gp, w);
  int iter = 0;
  auto try_polish = [&] {
    const double top = w.maxCoeff();
    for (double rel : {1e-12, 1e-9, 1e-6, 1e-4, 1e-2}) {
      if (auto v = polish(gp, w, rel * top)) {
        const double res = original_residual(gp, *v);
        if (res < best_residual) {
          best_residual = res;
          best = *v;
        }
      }
    }
  };

  for (iter = 1; iter <= options.max_iters; ++iter) {
    Eigen::VectorXd candidate;
    Eigen::VectorXd r_new;
    double obj_new = 0.0;
    const double reference = *std::max_element(history.begin(), history.end());
    // nonmonotone backtracking on the BB step
    for (int bt = 0; bt < 50; ++bt) {
      candidate = (w - step * grad).cwiseMax(0.0);
      r_new = gp.scaled * candidate - gp.target;
      obj_new = 0.5 * r_new.squaredNorm();
      if (obj_new <= reference + 1e-4 * grad.dot(candidate - w)) break;
      step *= 0.5;
    }
    const Eigen::VectorXd grad_new = gp.scaled.transpose() * r_new;
    const Eigen::VectorXd ds = candidate - w;
    const Eigen::VectorXd dg = grad_new - grad;
    w = std::move(candidate);
    r = std::move(r_new);
    grad = grad_new;
    objective = obj_new;
    history.push_back(objective);
    if (history.size() > kMemory) history.pop_front();

    const double sy = ds.dot(dg);
    if (sy > 0.0) {
      step = (iter % 2 == 0) ? ds.squaredNorm() / sy : sy / dg.squaredNorm();
    } else {
      step = 1.0 / lipschitz;
    }
    step = std::clamp(step, 1e-10 / lipschitz, 1e10 / lipschitz);

    if (iter % 50 == 0 || iter == options.max_iters) {
      const double res = original_residual(gp, w);
      if (res < best_residual) {
        best_residual = res;
        best = w;
      }
      if (iter % 500 == 0) try_polish();
      if (best_residual <= 1e-3 * options.tol) break;
      if (ds.norm() == 0.0) break;
    }
  }
  iter = std::min(iter, options.max_iters);
  if (best_residual > 1e-3 * options.tol) try_polish();
  if (best_residual > 1e-3 * options.tol) {
    const Eigen::VectorXd v = active_set_nnls(gp, 3 * static_cast<int>(gp.scaled.rows()) + 100);
    const double res = original_residual(gp, v);
    if (res < best_residual) {
      best_residual = res;
      best = v;
    }
  }

  RecoveryResult result;
  result.box = box;
  result.iterations = iter;
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;
  Eigen::VectorXd kept = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (best[j] > kSupportThreshold) {
      atoms.push_back(gp.atoms[static_cast<std::size_t>(j)]);
      weights.push_back(best[j]);
      kept[j] = best[j];
    }
  }
  result.residual = original_residual(gp, kept);
  result.measure = AtomicMeasure(s.dim(), std::move(atoms), std::move(weights));
  result.success = result.residual <= options.tol;
  return result;
}

RepresentationReport verify_representation(const MomentSequence& s, const AtomicMeasure& mu,
                                           const std::optional<BoxSpec>& box) {
  if (mu.dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "measure and moment dimensions differ");
  }
  RepresentationReport report;
  const auto& basis = s.basis();
  report.residuals.resize(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      acc += mu.weights()[j] * monomial_at(basis[k], mu.atoms()[j]);
    }
    report.residuals[k] = std::abs(s.values()[k] - acc);
    report.max_residual = std::max(report.max_residual, report.residuals[k]);
  }
  if (box) {
    for (const auto& x : mu.atoms()) {
      if (!box->contains(x, 1e-12)) report.atoms_in_box = false;
    }
  }
  return report;
}

}  // namespace momentcone
