#include "momentcone/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "momentcone/error.hpp"

namespace momentcone {

namespace {

// degree·|log r_i| beyond this switches r^α to log space
constexpr double kLogSpaceThreshold = 600.0;

bool needs_log_space(std::span<const double> r, const MultiIndex& alpha) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    worst += static_cast<double>(alpha[i]) * std::abs(std::log(r[i]));
  }
  return worst > kLogSpaceThreshold;
}

double log_weight(std::span<const double> r, const MultiIndex& alpha) {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (alpha[i] != 0) acc += static_cast<double>(alpha[i]) * std::log(r[i]);
  }
  return acc;
}

void require_dim(const Polynomial& s, const WeightSpec& w) {
  if (s.dim() != w.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sequence and weight dimensions differ");
  }
}

// Neumaier-compensated sum in the given (fixed) order.
double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : xs) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

Exponent Exponent::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "exponent denominator is zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  Exponent e;
  e.infinite_ = false;
  e.num_ = num / g;
  e.den_ = den / g;
  if (e.num_ < e.den_) throw Error(ErrorCode::Domain, "exponent p must satisfy p >= 1");
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
  while (!trimmed.empty() && trimmed.back() == ' ') trimmed.remove_suffix(1);
  if (trimmed == "inf" || trimmed == "+inf" || trimmed == "infinity" || trimmed == "Inf") {
    return infinity();
  }
  auto parse_int = [&](std::string_view digits) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
      throw Error(ErrorCode::Parse, "cannot parse exponent '" + std::string(text) + "'");
    }
    return v;
  };
  if (auto slash = trimmed.find('/'); slash != std::string_view::npos) {
    return rational(parse_int(trimmed.substr(0, slash)), parse_int(trimmed.substr(slash + 1)));
  }
  if (auto dot = trimmed.find('.'); dot != std::string_view::npos) {
    const auto whole = trimmed.substr(0, dot);
    const auto frac = trimmed.substr(dot + 1);
    if (frac.size() > 15) throw Error(ErrorCode::Parse, "too many decimals in exponent");
    std::int64_t den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    return rational(w * den + f, den);
  }
  return rational(parse_int(trimmed), 1);
}

double Exponent::value() const noexcept {
  return infinite_ ? kInfinity : static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Exponent conjugate_exponent(const Exponent& p) {
  if (p.is_infinite()) return Exponent::rational(1);
  if (p.numerator() == p.denominator()) return Exponent::infinity();
  // 1/p + 1/q = 1 with p = a/b gives q = a/(a−b)
  return Exponent::rational(p.numerator(), p.numerator() - p.denominator());
}

WeightSpec::WeightSpec(Exponent p_, std::vector<double> r_) : p(p_), r(std::move(r_)) {
  if (r.empty()) throw Error(ErrorCode::InvalidArgument, "weight vector is empty");
  for (double ri : r) {
    if (!(ri > 0.0) || !std::isfinite(ri)) {
      throw Error(ErrorCode::Domain, "weights r_i must be positive and finite");
    }
  }
}

WeightSpec WeightSpec::unweighted(Exponent p, std::size_t n) {
  return WeightSpec(p, std::vector<double>(n, 1.0));
}

DualSpec dual_weight(const WeightSpec& w) {
  const Exponent q = conjugate_exponent(w.p);
  std::vector<double> r(w.r.size());
  if (w.p.is_infinite() || q.is_infinite()) {
    std::transform(w.r.begin(), w.r.end(), r.begin(), [](double ri) { return 1.0 / ri; });
  } else {
    // q/p = 1/(p−1) = b/(a−b)
    const double q_over_p = static_cast<double>(w.p.denominator()) /
                            static_cast<double>(w.p.numerator() - w.p.denominator());
    std::transform(w.r.begin(), w.r.end(), r.begin(),
                   [&](double ri) { return std::pow(ri, -q_over_p); });
  }
  return DualSpec{q, std::move(r)};
}

double weight_power(std::span<const double> r, const MultiIndex& alpha) {
  if (needs_log_space(r, alpha)) return std::exp(log_weight(r, alpha));
  double v = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (alpha[i] != 0) v *= std::pow(r[i], static_cast<double>(alpha[i]));
  }
  return v;
}

double weighted_norm(const Polynomial& s, const WeightSpec& w) {
  require_dim(s, w);
  if (s.is_zero()) return 0.0;
  bool log_space = false;
  for (const auto& [alpha, c] : s.terms()) log_space = log_space || needs_log_space(w.r, alpha);

  if (w.p.is_infinite()) {
    double best = 0.0;
    for (const auto& [alpha, c] : s.terms()) {
      const double v = log_space ? std::exp(std::log(std::abs(c)) + log_weight(w.r, alpha))
                                 : std::abs(c) * weight_power(w.r, alpha);
      best = std::max(best, v);
    }
    return best;
  }

  const double p = w.p.value();
  std::vector<double> terms;
  terms.reserve(s.num_terms());
  if (!log_space) {
    for (const auto& [alpha, c] : s.terms()) {
      const double a = std::abs(c);
      terms.push_back((p == 1.0 ? a : std::pow(a, p)) * weight_power(w.r, alpha));
    }
    const double total = compensated_sum(terms);
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
  }
  // log-sum-exp
  for (const auto& [alpha, c] : s.terms()) {
    terms.push_back(p * std::log(std::abs(c)) + log_weight(w.r, alpha));
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  for (double& t : terms) t = std::exp(t - top);
  return std::exp((top + std::log(compensated_sum(terms))) / p);
}

Polynomial scaling_isometry(const Polynomial& s, const WeightSpec& w, IsometryDirection dir) {
  require_dim(s, w);
  if (w.p.is_infinite()) {
    throw Error(ErrorCode::Domain, "the scaling isometry is defined for p < inf only");
  }
  const double sign = dir == IsometryDirection::Forward ? -1.0 : 1.0;
  const double inv_p = 1.0 / w.p.value();
  std::vector<double> c(w.r.size());
  std::transform(w.r.begin(), w.r.end(), c.begin(),
                 [&](double ri) { return std::pow(ri, sign * inv_p); });
  return axis_scale(s, c);
}

double eval_sequence_norm(std::span<const double> x, const WeightSpec& w) {
  if (x.size() != w.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point and weight dimensions differ");
  }
  const DualSpec dual = dual_weight(w);
  if (dual.q.is_infinite()) {
    // sup_α Π (|x_i| r′_i)^{α_i}: 1 on the closed box, unbounded outside
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) * dual.r[i] > 1.0) return kInfinity;
    }
    return 1.0;
  }
  const double q = dual.q.value();
  double product = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ratio = std::pow(std::abs(x[i]), q) * dual.r[i];
    if (!(ratio < 1.0)) return kInfinity;
    product /= (1.0 - ratio);
  }
  return std::pow(product, 1.0 / q);
}

bool is_evaluation_continuous(std::span<const double> x, const WeightSpec& w) {
  return std::isfinite(eval_sequence_norm(x, w));
}

HolderSides holder_product_norm(const Polynomial& a, const Polynomial& b, const Exponent& p) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "Hoelder pair dimension mismatch");
  }
  std::vector<double> products;
  for (const auto& [alpha, ca] : a.terms()) {
    const double cb = b.coef(alpha);
    if (cb != 0.0) products.push_back(std::abs(ca * cb));
  }
  const Exponent q = conjugate_exponent(p);
  return HolderSides{compensated_sum(products),
                     weighted_norm(a, WeightSpec::unweighted(p, a.dim())) *
                         weighted_norm(b, WeightSpec::unweighted(q, b.dim()))};
}

std::vector<double> box_half_widths(const WeightSpec& w) {
  std::vector<double> c(w.r.size());
  const double inv_p = w.p.is_infinite() ? 1.0 : 1.0 / w.p.value();
  std::transform(w.r.begin(), w.r.end(), c.begin(),
                 [&](double ri) { return std::pow(ri, inv_p); });
  return c;
}

}  // namespace momentcone
