#include "momentcone/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "momentcone/error.hpp"

namespace momentcone {

namespace {

void require_same_dim(const Polynomial& f, const Polynomial& g) {
  if (f.dim() != g.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "polynomial dimension mismatch: " + std::to_string(f.dim()) + " vs " +
                    std::to_string(g.dim()));
  }
}

double monomial_value(const MultiIndex& alpha, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    if (alpha[i] != 0) v *= std::pow(x[i], static_cast<double>(alpha[i]));
  }
  return v;
}

}  // namespace

void TermAccumulator::add(const MultiIndex& alpha, double c) {
  if (alpha.dim() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "exponent length does not match dimension");
  }
  if (c == 0.0) return;
  Entry& e = entries_[alpha];
  e.sum += c;
  e.abs_sum += std::abs(c);
}

Polynomial TermAccumulator::finish() && {
  Polynomial::Terms terms;
  for (auto& [alpha, e] : entries_) {
    if (e.sum == 0.0 || !(std::abs(e.sum) >= kCancellationTolerance * e.abs_sum)) continue;
    terms.emplace_hint(terms.end(), alpha, e.sum);
  }
  return Polynomial(n_, std::move(terms));
}

Polynomial Polynomial::constant(std::size_t n, double c) {
  TermAccumulator acc(n);
  acc.add(MultiIndex(n), c);
  return std::move(acc).finish();
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double c) {
  TermAccumulator acc(alpha.dim());
  acc.add(alpha, c);
  return std::move(acc).finish();
}

Polynomial Polynomial::variable(std::size_t n, std::size_t i) {
  if (i >= n) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  return monomial(MultiIndex::unit(n, i), 1.0);
}

Polynomial Polynomial::from_terms(std::size_t n,
                                  const std::vector<std::pair<MultiIndex, double>>& terms) {
  Terms out;
  for (const auto& [alpha, c] : terms) {
    if (alpha.dim() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "exponent " + alpha.to_string() + " has length " +
                      std::to_string(alpha.dim()) + ", expected " + std::to_string(n));
    }
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    if (out.contains(alpha)) {
      throw Error(ErrorCode::InvalidArgument, "duplicate exponent " + alpha.to_string());
    }
    out.emplace(alpha, c);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return Polynomial(n, std::move(out));
}

int Polynomial::degree() const noexcept {
  // graded order: the last term has the largest total degree
  return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.total_degree());
}

double Polynomial::coef(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const { return coef(MultiIndex(n_)); }

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (const auto& [alpha, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    const bool is_const = alpha.total_degree() == 0;
    double mag = c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    mag = std::abs(c);
    if (is_const) {
      os << mag;
    } else {
      if (mag != 1.0) os << mag << '*';
      os << alpha.to_string();
    }
    first = false;
  }
  return os.str();
}

Polynomial add(const Polynomial& f, const Polynomial& g) {
  require_same_dim(f, g);
  TermAccumulator acc(f.dim());
  for (const auto& [a, c] : f.terms()) acc.add(a, c);
  for (const auto& [a, c] : g.terms()) acc.add(a, c);
  return std::move(acc).finish();
}

Polynomial subtract(const Polynomial& f, const Polynomial& g) {
  require_same_dim(f, g);
  TermAccumulator acc(f.dim());
  for (const auto& [a, c] : f.terms()) acc.add(a, c);
  for (const auto& [a, c] : g.terms()) acc.add(a, -c);
  return std::move(acc).finish();
}

Polynomial multiply(const Polynomial& f, const Polynomial& g) {
  require_same_dim(f, g);
  TermAccumulator acc(f.dim());
  for (const auto& [a, ca] : f.terms()) {
    for (const auto& [b, cb] : g.terms()) acc.add(a + b, ca * cb);
  }
  return std::move(acc).finish();
}

Polynomial scale(const Polynomial& f, double c) {
  TermAccumulator acc(f.dim());
  for (const auto& [a, ca] : f.terms()) acc.add(a, c * ca);
  return std::move(acc).finish();
}

double evaluate(const Polynomial& f, std::span<const double> x) {
  if (x.size() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension does not match polynomial");
  }
  // Neumaier summation
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& [alpha, c] : f.terms()) {
    const double term = c * monomial_value(alpha, x);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

Polynomial axis_scale(const Polynomial& f, std::span<const double> c) {
  if (c.size() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "scale vector length does not match dimension");
  }
  for (double ci : c) {
    if (!(ci > 0.0) || !std::isfinite(ci)) {
      throw Error(ErrorCode::Domain, "axis scale factors must be positive and finite");
    }
  }
  TermAccumulator acc(f.dim());
  for (const auto& [alpha, coef] : f.terms()) acc.add(alpha, coef * monomial_value(alpha, c));
  return std::move(acc).finish();
}

Polynomial homogeneous_part(const Polynomial& f, int d) {
  if (d < 0) throw Error(ErrorCode::InvalidArgument, "degree must be nonnegative");
  TermAccumulator acc(f.dim());
  for (const auto& [alpha, c] : f.terms()) {
    if (static_cast<int>(alpha.total_degree()) == d) acc.add(alpha, c);
  }
  return std::move(acc).finish();
}

Polynomial truncate(const Polynomial& f, int d) {
  TermAccumulator acc(f.dim());
  for (const auto& [alpha, c] : f.terms()) {
    if (static_cast<int>(alpha.total_degree()) <= d) acc.add(alpha, c);
  }
  return std::move(acc).finish();
}

Polynomial series_sqrt(const Polynomial& f, int max_degree) {
  if (max_degree < 0) throw Error(ErrorCode::InvalidArgument, "degree bound must be nonnegative");
  const double f0 = f.constant_term();
  if (!(f0 > 0.0)) {
    throw Error(ErrorCode::Domain, "series square root needs a positive constant term");
  }
  const std::size_t n = f.dim();
  std::vector<Polynomial> parts;
  parts.reserve(static_cast<std::size_t>(max_degree) + 1);
  const double g0 = std::sqrt(f0);
  parts.push_back(Polynomial::constant(n, g0));
  for (int d = 1; d <= max_degree; ++d) {
    TermAccumulator acc(n);
    const Polynomial fd = homogeneous_part(f, d);
    for (const auto& [alpha, c] : fd.terms()) acc.add(alpha, c);
    for (int j = 1; j < d; ++j) {
      for (const auto& [a, ca] : parts[j].terms()) {
        for (const auto& [b, cb] : parts[d - j].terms()) acc.add(a + b, -ca * cb);
      }
    }
    parts.push_back(scale(std::move(acc).finish(), 1.0 / (2.0 * g0)));
  }
  TermAccumulator out(n);
  for (const auto& part : parts) {
    for (const auto& [alpha, c] : part.terms()) out.add(alpha, c);
  }
  return std::move(out).finish();
}

Polynomial partial_derivative(const Polynomial& f, std::size_t i) {
  if (i >= f.dim()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  TermAccumulator acc(f.dim());
  for (const auto& [alpha, c] : f.terms()) {
    if (alpha[i] == 0) continue;
    std::vector<std::uint32_t> e(alpha.exponents().begin(), alpha.exponents().end());
    const double k = e[i]--;
    acc.add(MultiIndex(std::move(e)), k * c);
  }
  return std::move(acc).finish();
}

}  // namespace momentcone
