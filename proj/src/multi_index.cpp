#include "momentcone/multi_index.hpp"

#include <algorithm>
#include <numeric>

#include "momentcone/error.hpp"

namespace momentcone {

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  std::vector<std::uint32_t> e(n, 0);
  e.at(i) = 1;
  return MultiIndex(std::move(e));
}

std::uint32_t MultiIndex::total_degree() const noexcept {
  return std::accumulate(exps_.begin(), exps_.end(), std::uint32_t{0});
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index dimension mismatch");
  }
  std::vector<std::uint32_t> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(i + 1);
    if (exps_[i] > 1) out += '^' + std::to_string(exps_[i]);
  }
  return out.empty() ? "1" : out;
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const auto da = a.total_degree();
  const auto db = b.total_degree();
  if (da != db) return da < db;
  const auto ea = a.exponents();
  const auto eb = b.exponents();
  // larger leading exponent first within a degree
  return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
}

namespace {

// Appends every exponent vector of total degree exactly d, X1-heavy first.
void append_degree(std::size_t n, std::uint32_t d, std::vector<std::uint32_t>& prefix,
                   std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == n) {
    prefix.push_back(d);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::uint32_t k = d + 1; k-- > 0;) {
    prefix.push_back(k);
    append_degree(n, d - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t n, int degree) : n_(n), degree_(degree) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "degree must be nonnegative");
  monomials_.reserve(simplex_size(n, degree));
  std::vector<std::uint32_t> prefix;
  for (int d = 0; d <= degree; ++d) {
    append_degree(n, static_cast<std::uint32_t>(d), prefix, monomials_);
  }
  for (std::size_t k = 0; k < monomials_.size(); ++k) index_.emplace(monomials_[k], k);
}

std::size_t MonomialBasis::index_of(const MultiIndex& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? monomials_.size() : it->second;
}

std::size_t simplex_size(std::size_t n, int d) {
  if (d < 0) return 0;
  // C(n+d, d) built incrementally; exact for desk-scale sizes.
  std::size_t result = 1;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(d); ++k) {
    result = result * (n + k) / k;
  }
  return result;
}

}  // namespace momentcone
