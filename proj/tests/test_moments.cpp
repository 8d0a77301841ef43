#include <doctest.h>

#include <cmath>
#include <random>

#include "momentcone/error.hpp"
#include "momentcone/io.hpp"
#include "momentcone/measures.hpp"
#include "momentcone/moments.hpp"
#include "test_support.hpp"

using namespace momentcone;
using momentcone::testing::poly1;
using momentcone::testing::random_point;
using momentcone::testing::random_polynomial;

namespace {

// ∫_{-1}^{1} x^k dx by composite Simpson on 2000 panels.
double integrate_power(int k) {
  const int m = 2000;
  const double h = 2.0 / m;
  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double x = -1.0 + j * h;
    const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * std::pow(x, k);
  }
  return acc * h / 3.0;
}

MomentSequence lebesgue(int max_degree) {
  std::vector<double> v;
  for (int k = 0; k <= max_degree; ++k) v.push_back(integrate_power(k));
  return MomentSequence(1, max_degree, v);
}

MomentSequence delta(std::vector<double> point, int max_degree) {
  const std::size_t n = point.size();
  return moments_of_measure(AtomicMeasure(n, {point}, {1.0}), max_degree);
}

}  // namespace

TEST_CASE("sequence construction") {
  const auto s = MomentSequence::from_entries(
      1, 2, {{MultiIndex{0}, 1.0}, {MultiIndex{1}, 0.0}, {MultiIndex{2}, 1.0}});
  CHECK(s(MultiIndex{2}) == 1.0);
  CHECK_THROWS_AS(s(MultiIndex{3}), Error);
  try {
    MomentSequence::from_entries(1, 2, {{MultiIndex{0}, 1.0}, {MultiIndex{2}, 1.0}});
    FAIL("expected a missing-moment error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientMoments);
  }
  CHECK_THROWS_AS(MomentSequence(2, 2, {1.0, 2.0}), Error);
}

TEST_CASE("apply_functional") {
  const auto d0 = delta({0.0}, 4);
  CHECK(apply_functional(d0, poly1({3, 0, 1})) == 3.0);
  CHECK(apply_functional(d0, Polynomial(1)) == 0.0);
  CHECK_THROWS_AS(apply_functional(d0, poly1({0, 0, 0, 0, 0, 1})), Error);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> atoms;
    std::vector<double> weights;
    for (int j = 0; j < 3; ++j) {
      atoms.push_back(random_point(rng, 2, -1.5, 1.5));
      weights.push_back(random_point(rng, 1, 0.1, 2.0)[0]);
    }
    const AtomicMeasure mu(2, atoms, weights);
    const auto s = moments_of_measure(mu, 6);
    const auto f = random_polynomial(rng, 2, 6, 10);
    double direct = 0.0;
    for (int j = 0; j < 3; ++j) direct += weights[j] * evaluate(f, atoms[j]);
    CHECK(apply_functional(s, f) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("moment matrices") {
  const auto s = MomentSequence(1, 2, {1.0, 0.0, 1.0});
  const auto m = moment_matrix(s, 1);
  CHECK(m.entries == Eigen::Matrix2d::Identity());
  CHECK_THROWS_AS(moment_matrix(s, 2), Error);

  const auto d0 = moment_matrix(delta({0.0, 0.0}, 4), 2);
  CHECK(d0.entries.rows() == 6);
  CHECK(d0.entries(0, 0) == 1.0);
  CHECK(d0.entries.cwiseAbs().sum() == 1.0);

  const auto leb = lebesgue(10);
  const auto m1 = moment_matrix(leb, 1);
  CHECK(m1.entries(0, 0) == doctest::Approx(2.0));
  CHECK(std::abs(m1.entries(0, 1)) <= 1e-12);
  CHECK(m1.entries(1, 1) == doctest::Approx(2.0 / 3.0));

  const auto loc = localized_moment_matrix(leb, poly1({1, 0, -1}), 1);
  CHECK(loc.entries(0, 0) == doctest::Approx(4.0 / 3.0));
  CHECK(std::abs(loc.entries(0, 1)) <= 1e-12);
  CHECK(loc.entries(1, 1) == doctest::Approx(4.0 / 15.0));

  const auto plain = moment_matrix(leb, 3);
  CHECK(localized_moment_matrix(leb, Polynomial::constant(1, 1.0), 3).entries == plain.entries);
  CHECK(localized_moment_matrix(leb, Polynomial::constant(1, -1.0), 3).entries == -plain.entries);
  CHECK_THROWS_AS(localized_moment_matrix(leb, poly1({1, 0, -1}), 5), Error);

  // dimension C(n+d, n), exact symmetry
  std::mt19937_64 rng(32);
  const AtomicMeasure mu(3, {random_point(rng, 3, -1, 1), random_point(rng, 3, -1, 1)}, {1.0, 2.0});
  const auto m3 = moment_matrix(moments_of_measure(mu, 6), 3);
  CHECK(m3.entries.rows() == 20);
  CHECK(m3.entries == m3.entries.transpose());
}

TEST_CASE("matrix realizes l(h^2)") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const AtomicMeasure mu(2, {random_point(rng, 2, -1, 1), random_point(rng, 2, -1, 1)}, {0.7, 1.3});
    const auto s = moments_of_measure(mu, 6);
    const auto h = random_polynomial(rng, 2, 3, 8);
    const auto m = moment_matrix(s, 3);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.index.size()));
    for (std::size_t k = 0; k < m.index.size(); ++k) v[static_cast<Eigen::Index>(k)] = h.coef(m.index[k]);
    const double quad = v.dot(m.entries * v);
    CHECK(apply_functional(s, h * h) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("PSD checks") {
  CHECK_FALSE(is_psd_functional(MomentSequence(1, 2, {1.0, 0.0, -1.0}), 1));
  CHECK(min_eigenvalue(moment_matrix(MomentSequence(1, 2, {1.0, 0.0, -1.0}), 1)) ==
        doctest::Approx(-1.0));
  CHECK(is_psd_functional(delta({0.0, 0.0}, 6), 3));

  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<double>> atoms;
    std::vector<double> weights;
    for (int j = 0; j < 4; ++j) {
      atoms.push_back(random_point(rng, 2, -1, 1));
      weights.push_back(random_point(rng, 1, 0.1, 1)[0]);
    }
    const auto s = moments_of_measure(AtomicMeasure(2, atoms, weights), 8);
    for (int d = 0; d <= 4; ++d) CHECK(min_eigenvalue(moment_matrix(s, d)) >= -1e-9);
    // 2 − x² − y² is nonnegative on every atom
    const auto g = Polynomial::constant(2, 2.0) - Polynomial::monomial(MultiIndex{2, 0}) -
                   Polynomial::monomial(MultiIndex{0, 2});
    for (int d = 0; d <= 3; ++d) CHECK(min_eigenvalue(localized_moment_matrix(s, g, d)) >= -1e-9);
  }

  const auto leb = lebesgue(10);
  for (int d = 1; d <= 4; ++d) {
    CHECK(is_psd_functional(leb, d));
    CHECK(min_eigenvalue(moment_matrix(leb, d)) >= 1e-3);
  }
}

TEST_CASE("check_quadratic_module") {
  const auto leb = lebesgue(10);
  const auto r = check_quadratic_module(leb, {poly1({1, 0, -1})}, 1.0, 1);
  CHECK(r.pass);
  REQUIRE(r.checks.size() == 3);
  CHECK(r.checks[0].label == "1");
  CHECK(r.checks[0].min_eigenvalue == doctest::Approx(2.0 / 3.0));
  CHECK(r.checks[1].min_eigenvalue == doctest::Approx(4.0 / 15.0));
  CHECK(r.checks[2].min_eigenvalue == doctest::Approx(4.0 / 15.0));

  CHECK(check_quadratic_module(delta({0.0}, 4), {}, 1.0, 1).pass);

  const auto minus_one = delta({-1.0}, 2);
  const auto bad = check_quadratic_module(minus_one, {poly1({0, 1})}, 1.0, 0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.checks[1].min_eigenvalue == doctest::Approx(-1.0));
  CHECK(bad.checks[0].pass);

  CHECK_THROWS_AS(check_quadratic_module(leb, {poly1({1, 0, -1})}, 1.0, 5), Error);
}

TEST_CASE("dual_norm_of_moments") {
  for (const auto& w : {WeightSpec(Exponent::rational(1), {3.0}), WeightSpec(Exponent::rational(2), {0.5}),
                        WeightSpec(Exponent::infinity(), {2.0})}) {
    CHECK(dual_norm_of_moments(delta({0.0}, 6), w).value == doctest::Approx(1.0));
  }
  const auto two = delta({2.0}, 10);
  const auto ok = dual_norm_of_moments(two, WeightSpec(Exponent::rational(1), {2.0}));
  CHECK(ok.value == doctest::Approx(1.0));
  CHECK_FALSE(ok.growing);
  CHECK(ok.truncation_degree == 10);
  const auto grows = dual_norm_of_moments(two, WeightSpec(Exponent::rational(1), {1.0}));
  CHECK(grows.value == doctest::Approx(1024.0));
  CHECK(grows.growing);

  // symmetric measure: zero odd shells do not count as decay or growth
  const auto sym = moments_of_measure(AtomicMeasure(1, {{-0.5}, {0.5}}, {0.5, 0.5}), 8);
  CHECK_FALSE(dual_norm_of_moments(sym, WeightSpec(Exponent::rational(2), {1.0})).growing);

  // Hölder pairing |ℓ(f)| <= ‖f‖_{p,r} · ‖s‖_dual
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const AtomicMeasure mu(2, {random_point(rng, 2, -1, 1), random_point(rng, 2, -1, 1)}, {0.4, 0.9});
    const auto s = moments_of_measure(mu, 6);
    const auto f = random_polynomial(rng, 2, 6, 10);
    const auto r = random_point(rng, 2, 0.5, 2.0);
    for (const auto& p : {Exponent::rational(1), Exponent::rational(3, 2), Exponent::rational(2),
                          Exponent::infinity()}) {
      const WeightSpec w(p, r);
      const double bound = weighted_norm(f, w) * dual_norm_of_moments(s, w).value;
      CHECK(std::abs(apply_functional(s, f)) <= bound * (1 + 1e-12) + 1e-14);
    }
  }
}

TEST_CASE("serialized matrices are byte-identical") {
  const auto s = lebesgue(8);
  auto render = [&] {
    const auto m = moment_matrix(s, 4);
    io::json rows = io::json::array();
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
      io::json row = io::json::array();
      for (Eigen::Index j = 0; j < m.entries.cols(); ++j) row.push_back(m.entries(i, j));
      rows.push_back(row);
    }
    return io::dump(rows);
  };
  CHECK(render() == render());
  CHECK(io::dump(io::to_json(s)) == io::dump(io::to_json(lebesgue(8))));
}
