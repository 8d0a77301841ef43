// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "momentcone/approx.hpp"
#include "momentcone/measures.hpp"
#include "momentcone/moments.hpp"
#include "momentcone/norms.hpp"
#include "test_support.hpp"

using namespace momentcone;
using momentcone::testing::random_point;
using momentcone::testing::random_polynomial;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome coefficientwise_closure() {
  Outcome out;
  double overall_constant = 0.0, overall_other = 0.0, slowest = 0.0;
  const auto x1 = Polynomial::variable(2, 0);
  const auto mixed =
      Polynomial::from_terms(2, {{MultiIndex{1, 1}, 1.0}, {MultiIndex{3, 0}, -5.0}});
  for (const auto* f : {&x1, &mixed}) {
    const auto t0 = Clock::now();
    for (int i : {5, 10, 20}) {
      const auto h = sqrt_square_approx(*f, i);
      const auto sq = h * h;
      double worst_constant = 0.0;
      double worst_other = 0.0;
      const MonomialBasis basis(2, i);
      for (const auto& alpha : basis.monomials()) {
        const double err = sq.coef(alpha) - f->coef(alpha);
        if (alpha.total_degree() == 0) {
          worst_constant = std::abs(err - 1.0 / i);
        } else {
          worst_other = std::max(worst_other, std::abs(err));
        }
      }
      overall_constant = std::max(overall_constant, worst_constant);
      overall_other = std::max(overall_other, worst_other);
      out.require(worst_constant <= 1e-12,
                  f->to_string() + " i=" + std::to_string(i) + fmt(" constant off by %.3g", worst_constant));
      out.require(worst_other <= 1e-10,
                  f->to_string() + " i=" + std::to_string(i) + fmt(" coefficient error %.3g", worst_other));
    }
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    out.require(dt < 1.0, f->to_string() + fmt(" took %.2fs", dt));
  }
  if (out.pass) {
    out.detail = fmt("constant error off 1/i by <= %.3g, other coefficients <= %.3g", overall_constant,
                     overall_other) +
                 fmt(", slowest case %.3fs", slowest);
  }
  return out;
}

Outcome norm_duality_suite() {
  Outcome out;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 3);
  const Exponent finite[] = {Exponent::rational(1), Exponent::rational(3, 2), Exponent::rational(2),
                             Exponent::rational(3)};
  const Exponent ladder[] = {Exponent::rational(1), Exponent::rational(3, 2), Exponent::rational(2),
                             Exponent::rational(3), Exponent::infinity()};
  int isometry = 0, holder = 0, monotone = 0;
  double worst_excess = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(dim(rng));
    const auto s = random_polynomial(rng, n, 8, 12);
    const auto b = random_polynomial(rng, n, 8, 12);
    const auto r = random_point(rng, n, 0.2, 5.0);
    for (const auto& p : finite) {
      const WeightSpec w(p, r);
      const double base = weighted_norm(s, WeightSpec::unweighted(p, n));
      const double image = weighted_norm(scaling_isometry(s, w, IsometryDirection::Forward), w);
      if (std::abs(image - base) > 1e-12 * base) ++isometry;
    }
    double prev = kInfinity;
    for (const auto& p : ladder) {
      const auto h = holder_product_norm(s, b, p);
      if (h.product_bound - h.pointwise_l1 < -1e-12) ++holder;
      const double v = weighted_norm(s, WeightSpec::unweighted(p, n));
      // equal norms (single-term sequences) may differ in the last bit
      if (std::isfinite(prev)) worst_excess = std::max(worst_excess, (v - prev) / prev);
      if (v > prev * (1 + 1e-12)) ++monotone;
      prev = v;
    }
  }
  out.require(isometry == 0, std::to_string(isometry) + " isometry violations");
  out.require(holder == 0, std::to_string(holder) + " Hölder violations");
  out.require(monotone == 0, std::to_string(monotone) + " monotonicity violations");
  if (out.pass) out.detail = fmt("largest relative rounding excess in monotonicity %.3g", worst_excess);
  return out;
}

Outcome evaluation_continuity() {
  Outcome out;
  const auto l2 = WeightSpec::unweighted(Exponent::rational(2), 1);
  const std::vector<double> inside{0.9};
  const double closed = eval_sequence_norm(inside, l2);
  out.require(std::abs(closed - std::sqrt(1.0 / (1.0 - 0.81))) <= 1e-12, fmt("closed form %.15g", closed));
  // partial sums Σ_{k<=D} |x^k|^q r'^k with q = 2, r' = 1
  double partial = 0.0;
  double term = 1.0;
  int reached = -1;
  for (int k = 0; k <= 300; ++k) {
    partial += term;
    term *= 0.81;
    if (std::abs(std::sqrt(partial) - closed) <= 1e-6) {
      reached = k;
      break;
    }
  }
  out.require(reached >= 0, "partial sums did not reach 1e-6 by degree 300");

  const std::vector<double> edge{1.0};
  double edge_partial = 0.0;
  for (int k = 0; k <= 1000; ++k) edge_partial += 1.0;
  out.require(edge_partial > 1e3, fmt("boundary partial sum %.6g", edge_partial));
  out.require(std::isinf(eval_sequence_norm(edge, l2)) && !is_evaluation_continuous(edge, l2),
              "x=1 reported continuous");

  const auto linf = WeightSpec::unweighted(Exponent::infinity(), 1);
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    std::vector<std::pair<MultiIndex, double>> terms;
    for (std::uint32_t j = 0; j <= static_cast<std::uint32_t>(k); ++j) terms.emplace_back(MultiIndex{j}, 1.0 / k);
    const auto fk = Polynomial::from_terms(1, terms);
    worst = std::max(worst, std::abs(weighted_norm(fk, linf) - 1.0 / k));
    worst = std::max(worst, std::abs(std::abs(evaluate(fk, edge)) - (k + 1.0) / k));
  }
  out.require(worst <= 1e-12, fmt("divergence witness off by %.3g", worst));
  if (out.pass) {
    out.detail = "closed form " + fmt("%.12g", closed) + ", partial sums within 1e-6 at degree " +
                 std::to_string(reached);
  }
  return out;
}

// ∫_{-1}^{1} x^k dx by composite Simpson on 20000 panels.
double integrate_power(int k) {
  const int m = 20000;
  const double h = 2.0 / m;
  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double x = -1.0 + j * h;
    const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * std::pow(x, k);
  }
  return acc * h / 3.0;
}

Outcome psd_certification() {
  Outcome out;
  std::vector<double> leb;
  for (int k = 0; k <= 10; ++k) leb.push_back(integrate_power(k));
  const MomentSequence s(1, 10, leb);
  const Polynomial g = Polynomial::from_terms(1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, -1.0}});
  double smallest = kInfinity;
  for (int d = 1; d <= 4; ++d) {
    out.require(is_psd_functional(s, d), "Lebesgue d=" + std::to_string(d) + " not PSD");
    const auto qm = check_quadratic_module(s, {g}, 1.0, d);
    out.require(qm.pass, "quadratic module d=" + std::to_string(d) + " failed");
    for (const auto& c : qm.checks) smallest = std::min(smallest, c.min_eigenvalue);
  }
  out.require(smallest >= 1e-3, fmt("min eigenvalue %.3g", smallest));

  const MomentSequence bad(1, 2, {1.0, 0.0, -1.0});
  const double lambda = min_eigenvalue(moment_matrix(bad, 1));
  out.require(!is_psd_functional(bad, 1), "(1,0,-1) accepted");
  out.require(std::abs(lambda + 1.0) <= 1e-10, fmt("(1,0,-1) min eigenvalue %.12g", lambda));
  if (out.pass) out.detail = fmt("smallest Lebesgue eigenvalue %.4g, negative control %.12g", smallest, lambda);
  return out;
}

Outcome box_density() {
  Outcome out;
  const auto f = Polynomial::from_terms(1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, -1.0}});
  const auto l1 = WeightSpec::unweighted(Exponent::rational(1), 1);
  for (double eps : {1.0, 0.5, 0.1}) {
    const auto r = box_sos_approx(f, l1, eps, 2);
    const std::string tag = fmt("eps=%g", eps);
    if (!r.certified) {
      // no Gram search can succeed if the candidate is negative somewhere
      const auto candidate = f + eps * perturbation(1, 2, Perturbation::Exponential);
      double lowest = kInfinity, where = 0.0;
      for (int k = -2000; k <= 2000; ++k) {
        const std::vector<double> x{k / 100.0};
        const double v = evaluate(candidate, x);
        if (v < lowest) {
          lowest = v;
          where = x[0];
        }
      }
      out.require(false, tag + " not certified at D=2" +
                             fmt(" (f + eps*Theta_2 has minimum %.4g at X=%.3g)", lowest, where));
      continue;
    }
    out.require(r.perturbation_degree == 2 && r.family == Perturbation::Exponential,
                tag + " certified at D=" + std::to_string(r.perturbation_degree));
    out.require(r.residual <= 1e-8, tag + fmt(" residual %.3g", r.residual));
    out.require(std::abs(r.distance - 2.5 * eps) <= 1e-9, tag + fmt(" distance %.12g", r.distance));
  }
  out.require(!box_sos_approx(f, l1, 0.0, 6).certified, "eps=0 certified");

  // weighted: r=(4), p=2, box [-2, 2]; the preimage of 1 − X² under X ↦ X/2
  const auto fw = Polynomial::from_terms(1, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, -0.25}});
  const WeightSpec w(Exponent::rational(2), {4.0});
  for (double eps : {1.0, 0.5, 0.1}) {
    const auto r = box_sos_approx(fw, w, eps, 6);
    if (!r.certified) {
      out.require(false, fmt("weighted eps=%g not certified", eps));
      continue;
    }
    const double gap = std::abs(r.distance - r.unit_box_distance);
    out.require(gap <= 1e-9 * std::max(1.0, r.distance), fmt("weighted eps=%g identity gap %.3g", eps, gap));
  }
  return out;
}

Outcome measure_recovery() {
  Outcome out;
  std::mt19937_64 rng(77);
  const int grid = 51;
  std::uniform_int_distribution<int> pick(0, grid - 1);
  std::uniform_int_distribution<int> atoms_count(1, 5);
  std::uniform_real_distribution<double> weight(0.05, 2.0);
  std::uniform_real_distribution<double> radius(0.5, 3.0);
  const Exponent exps[] = {Exponent::rational(1), Exponent::rational(2), Exponent::rational(3, 2),
                           Exponent::infinity()};
  double worst_residual = 0.0;
  double slowest = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 2);
    std::vector<double> r(n);
    for (auto& v : r) v = radius(rng);
    const WeightSpec w(exps[trial % 4], r);
    const auto box = box_from_weight(w);
    std::vector<std::vector<double>> atoms;
    std::vector<double> weights;
    const int count = atoms_count(rng);
    for (int j = 0; j < count; ++j) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) {
        const int k = pick(rng);
        x[i] = k + 1 == grid ? box.upper[i] : box.lower[i] + (box.upper[i] - box.lower[i]) * k / (grid - 1);
      }
      atoms.push_back(x);
      weights.push_back(weight(rng));
    }
    const auto s = moments_of_measure(AtomicMeasure(n, atoms, weights), 6);
    const auto t0 = Clock::now();
    const auto rec = recover_measure(s, box, {grid, 1e-6, 20000});
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    worst_residual = std::max(worst_residual, rec.residual);
    const std::string tag = "measure " + std::to_string(trial);
    out.require(rec.success && rec.residual <= 1e-6, tag + fmt(" residual %.3g", rec.residual));
    out.require(dt < 10.0, tag + fmt(" took %.2fs", dt));
    if (rec.measure) {
      for (double v : rec.measure->weights()) out.require(v >= 0.0, tag + " negative weight");
      for (const auto& x : rec.measure->atoms()) out.require(box.contains(x), tag + " atom outside box");
    }
  }
  const auto bad = recover_measure(MomentSequence(1, 2, {1.0, 0.0, -1.0}), BoxSpec{{-1.0}, {1.0}});
  out.require(!bad.success && bad.residual >= 0.1, fmt("negative control residual %.3g", bad.residual));
  if (out.pass) {
    out.detail = fmt("worst residual %.3g, slowest %.2fs", worst_residual, slowest) +
                 fmt(", negative control residual %.3g", bad.residual);
  }
  return out;
}

Outcome hypothesis_link() {
  Outcome out;
  const AtomicMeasure mu(1, {{2.0}}, {1.0});
  const WeightSpec matched(Exponent::rational(1), {2.0});
  const WeightSpec unit(Exponent::rational(1), {1.0});
  for (int deg = 1; deg <= 12; ++deg) {
    const auto s = moments_of_measure(mu, deg);
    const auto good = dual_norm_of_moments(s, matched);
    out.require(std::abs(good.value - 1.0) <= 1e-12 && !good.growing,
                "r=2 degree " + std::to_string(deg) + fmt(" dual norm %.12g", good.value));
    const auto bad = dual_norm_of_moments(s, unit);
    out.require(std::abs(bad.value - std::ldexp(1.0, deg)) <= 1e-9 && bad.growing,
                "r=1 degree " + std::to_string(deg) + fmt(" sup %.12g", bad.value));
  }
  const auto s6 = moments_of_measure(mu, 6);
  const auto ok = recover_measure(s6, box_from_weight(matched));
  out.require(ok.success, fmt("recovery on [-2,2] residual %.3g", ok.residual));
  const auto fail = recover_measure(s6, box_from_weight(unit));
  out.require(!fail.success, fmt("recovery on [-1,1] succeeded with residual %.3g", fail.residual));
  if (out.pass) {
    out.detail = fmt("recovery residuals [-2,2] %.3g, [-1,1] %.3g", ok.residual, fail.residual);
  }
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 coefficientwise closure", coefficientwise_closure},
      {"2 norm and duality suite", norm_duality_suite},
      {"3 evaluation continuity", evaluation_continuity},
      {"4 PSD certification", psd_certification},
      {"5 box density", box_density},
      {"6 measure recovery", measure_recovery},
      {"7 hypothesis-to-box link", hypothesis_link},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %s%s%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.empty() ? "" : " : ",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
