#include "momentcone/moments.hpp"

#include <algorithm>
#include <cmath>

#include "momentcone/error.hpp"
#include "momentcone/linalg.hpp"

namespace momentcone {

MomentSequence::MomentSequence(std::size_t n, int max_degree, std::vector<double> values)
    : basis_(std::make_shared<const MonomialBasis>(n, max_degree)), values_(std::move(values)) {
  if (values_.size() != basis_->size()) {
    throw Error(ErrorCode::InvalidArgument,
                "moment sequence needs " + std::to_string(basis_->size()) + " values, got " +
                    std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite moment value");
  }
}

MomentSequence MomentSequence::from_entries(
    std::size_t n, int max_degree, const std::vector<std::pair<MultiIndex, double>>& entries) {
  const MonomialBasis basis(n, max_degree);
  std::vector<double> values(basis.size(), 0.0);
  std::vector<bool> seen(basis.size(), false);
  for (const auto& [alpha, v] : entries) {
    if (alpha.dim() != n) {
      throw Error(ErrorCode::DimensionMismatch, "moment exponent has the wrong length");
    }
    const std::size_t k = basis.index_of(alpha);
    if (k == basis.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "moment " + alpha.to_string() + " exceeds max_degree " +
                      std::to_string(max_degree));
    }
    if (seen[k]) throw Error(ErrorCode::InvalidArgument, "duplicate moment " + alpha.to_string());
    seen[k] = true;
    values[k] = v;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      throw Error(ErrorCode::InsufficientMoments,
                  "moment " + basis[k].to_string() + " is missing; the full simplex is required");
    }
  }
  return MomentSequence(n, max_degree, std::move(values));
}

double MomentSequence::operator()(const MultiIndex& alpha) const {
  const std::size_t k = basis_->index_of(alpha);
  if (k == basis_->size()) {
    if (alpha.dim() != dim()) {
      throw Error(ErrorCode::DimensionMismatch, "moment exponent has the wrong length");
    }
    throw Error(ErrorCode::InsufficientMoments,
                "moment " + alpha.to_string() + " beyond max_degree " +
                    std::to_string(max_degree()));
  }
  return values_[k];
}

double apply_functional(const MomentSequence& s, const Polynomial& f) {
  if (f.dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial and moment dimensions differ");
  }
  if (f.degree() > s.max_degree()) {
    throw Error(ErrorCode::InsufficientMoments, "polynomial degree exceeds available moments");
  }
  double acc = 0.0;
  for (const auto& [alpha, c] : f.terms()) acc += c * s(alpha);
  return acc;
}

MomentMatrix localized_moment_matrix(const MomentSequence& s, const Polynomial& g, int d) {
  if (g.dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "generator and moment dimensions differ");
  }
  if (d < 0) throw Error(ErrorCode::InvalidArgument, "matrix degree must be nonnegative");
  const int need = 2 * d + std::max(g.degree(), 0);
  if (need > s.max_degree()) {
    throw Error(ErrorCode::InsufficientMoments,
                "degree " + std::to_string(d) + " matrix needs moments up to " +
                    std::to_string(need) + ", have " + std::to_string(s.max_degree()));
  }
  const MonomialBasis basis(s.dim(), d);
  const auto m = static_cast<Eigen::Index>(basis.size());
  MomentMatrix out{d, basis.monomials(), Eigen::MatrixXd::Zero(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const MultiIndex ab = basis[static_cast<std::size_t>(i)] + basis[static_cast<std::size_t>(j)];
      double acc = 0.0;
      for (const auto& [gamma, c] : g.terms()) acc += c * s(ab + gamma);
      out.entries(i, j) = acc;
      out.entries(j, i) = acc;
    }
  }
  return out;
}

MomentMatrix moment_matrix(const MomentSequence& s, int d) {
  return localized_moment_matrix(s, Polynomial::constant(s.dim(), 1.0), d);
}

double min_eigenvalue(const MomentMatrix& m) { return min_eigenvalue(m.entries); }

double default_psd_tolerance(const MomentMatrix& m) {
  if (m.entries.rows() == 0) return 0.0;
  return 1e-9 * std::abs(m.entries.trace()) / static_cast<double>(m.entries.rows());
}

bool is_psd_functional(const MomentSequence& s, int d, std::optional<double> tol) {
  const MomentMatrix m = moment_matrix(s, d);
  return min_eigenvalue(m) >= -tol.value_or(default_psd_tolerance(m));
}

QuadraticModuleReport check_quadratic_module(const MomentSequence& s,
                                             const std::vector<Polynomial>& generators,
                                             double archimedean_bound, int d,
                                             std::optional<double> tol) {
  const std::size_t n = s.dim();
  std::vector<std::pair<std::string, Polynomial>> all;
  all.emplace_back("1", Polynomial::constant(n, 1.0));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    all.emplace_back("g" + std::to_string(k + 1), generators[k]);
  }
  Polynomial ball = Polynomial::constant(n, archimedean_bound);
  for (std::size_t i = 0; i < n; ++i) {
    const MultiIndex e = MultiIndex::unit(n, i);
    ball = ball - Polynomial::monomial(e + e);
  }
  all.emplace_back("N-|x|^2", std::move(ball));

  QuadraticModuleReport report;
  report.degree = d;
  report.archimedean_bound = archimedean_bound;
  report.pass = true;
  for (auto& [label, g] : all) {
    const MomentMatrix m = localized_moment_matrix(s, g, d);
    GeneratorCheck check;
    check.label = label;
    check.generator = g;
    check.min_eigenvalue = min_eigenvalue(m);
    check.tolerance = tol.value_or(default_psd_tolerance(m));
    check.pass = check.min_eigenvalue >= -check.tolerance;
    report.pass = report.pass && check.pass;
    report.checks.push_back(std::move(check));
  }
  return report;
}

DualNormReport dual_norm_of_moments(const MomentSequence& s, const WeightSpec& w) {
  if (w.dim() != s.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "weight and moment dimensions differ");
  }
  const DualSpec dual = dual_weight(w);
  DualNormReport report;
  report.q = dual.q;
  report.truncation_degree = s.max_degree();
  report.shells.assign(static_cast<std::size_t>(s.max_degree()) + 1, 0.0);
  const bool sup = dual.q.is_infinite();
  const double q = dual.q.value();
  const auto& basis = s.basis();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double a = std::abs(s.values()[k]);
    const double rw = weight_power(dual.r, basis[k]);
    double& shell = report.shells[basis[k].total_degree()];
    if (sup) {
      shell = std::max(shell, a * rw);
    } else {
      shell += (q == 1.0 ? a : std::pow(a, q)) * rw;
    }
  }
  if (sup) {
    report.value = *std::max_element(report.shells.begin(), report.shells.end());
  } else {
    double total = 0.0;
    for (double v : report.shells) total += v;
    report.value = q == 1.0 ? total : std::pow(total, 1.0 / q);
  }
  const std::size_t top = report.shells.size() - 1;
  if (top > 0) {
    const double last = report.shells[top];
    if (sup) {
      const double before =
          *std::max_element(report.shells.begin(), report.shells.begin() + static_cast<long>(top));
      report.growing = last > before * (1.0 + 1e-9);
    } else {
      // two shells back, so odd moments that vanish by symmetry do not trip it
      const double before = std::max(report.shells[top - 1], top >= 2 ? report.shells[top - 2] : 0.0);
      report.growing = last > 0.0 && last >= before * (1.0 - 1e-9);
    }
  }
  return report;
}

}  // namespace momentcone
