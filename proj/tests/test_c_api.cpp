#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "momentcone/momentcone.h"

using json = nlohmann::json;

namespace {

struct Report {
  char* text = nullptr;
  ~Report() { mc_string_free(text); }
  json parsed() const { return json::parse(text); }
};

mc_polynomial* parse_poly(const char* text) {
  mc_polynomial* f = nullptr;
  REQUIRE(mc_polynomial_parse(text, &f) == MC_OK);
  return f;
}

mc_weight* make_weight(const char* p, std::initializer_list<double> r) {
  mc_weight* w = nullptr;
  const std::vector<double> v(r);
  REQUIRE(mc_weight_create(p, v.data(), v.size(), &w) == MC_OK);
  return w;
}

mc_moments* parse_moments(const char* text) {
  mc_moments* s = nullptr;
  REQUIRE(mc_moments_parse(text, &s) == MC_OK);
  return s;
}

constexpr const char* kNotPsd =
    R"({"n": 1, "max_degree": 2, "values": [{"exp": [0], "s": 1}, {"exp": [1], "s": 0}, {"exp": [2], "s": -1}]})";

}  // namespace

TEST_CASE("status codes and last error") {
  mc_polynomial* f = nullptr;
  CHECK(mc_polynomial_parse("{oops", &f) == MC_ERR_PARSE);
  CHECK(f == nullptr);
  CHECK(std::string(mc_last_error()).size() > 0);
  CHECK(mc_polynomial_parse(R"({"n": 1, "terms": [{"exp": [1, 2], "coef": 1}]})", &f) != MC_OK);
  mc_weight* w = nullptr;
  const double r[] = {1.0};
  CHECK(mc_weight_create("0.5", r, 1, &w) != MC_OK);
  const double bad_r[] = {-1.0};
  CHECK(mc_weight_create("2", bad_r, 1, &w) != MC_OK);
  CHECK(mc_polynomial_parse(nullptr, &f) == MC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mc_version()).size() > 0);
}

TEST_CASE("norm through handles") {
  auto* f = parse_poly(R"({"n": 1, "terms": [{"exp": [0], "coef": 1}, {"exp": [1], "coef": 2}]})");
  auto* w = make_weight("2", {3.0});
  double v = 0.0;
  CHECK(mc_weighted_norm(f, w, &v) == MC_OK);
  CHECK(v == doctest::Approx(std::sqrt(13.0)));
  CHECK(mc_polynomial_dim(f) == 1);
  CHECK(mc_polynomial_degree(f) == 1);
  const double x[] = {2.0};
  CHECK(mc_polynomial_eval(f, x, 1, &v) == MC_OK);
  CHECK(v == 5.0);
  CHECK(mc_polynomial_eval(f, x, 2, &v) == MC_ERR_DIMENSION_MISMATCH);

  auto* w2 = make_weight("2", {1.0, 1.0});
  CHECK(mc_weighted_norm(f, w2, &v) == MC_ERR_DIMENSION_MISMATCH);

  const double p09[] = {0.9};
  auto* l2 = make_weight("2", {1.0});
  CHECK(mc_eval_sequence_norm(p09, 1, l2, &v) == MC_OK);
  CHECK(v == doctest::Approx(std::sqrt(1.0 / 0.19)));
  int cont = -1;
  const double p1[] = {1.0};
  CHECK(mc_is_evaluation_continuous(p1, 1, l2, &cont) == MC_OK);
  CHECK(cont == 0);
  CHECK(mc_eval_sequence_norm(p1, 1, l2, &v) == MC_OK);
  CHECK(std::isinf(v));

  mc_weight_free(l2);
  mc_weight_free(w2);
  mc_weight_free(w);
  mc_polynomial_free(f);
}

TEST_CASE("checks and pipeline") {
  auto* s = parse_moments(kNotPsd);
  Report psd;
  int passed = -1;
  CHECK(mc_psd_check(s, -1, 0.0, &psd.text, &passed) == MC_OK);
  CHECK(passed == 0);
  CHECK(psd.parsed()["generators"][0]["min_eigenvalue"].get<double>() == doctest::Approx(-1.0));

  auto* w = make_weight("2", {1.0});
  Report pipe;
  CHECK(mc_pipeline(s, nullptr, 0, 0.0, w, -1, 51, 1e-6, &pipe.text, &passed) == MC_OK);
  CHECK(passed == 0);
  const auto j = pipe.parsed();
  CHECK(j["psd"]["pass"] == false);
  CHECK(j["recovery"]["success"] == false);

  mc_measure* mu = nullptr;
  REQUIRE(mc_measure_parse(R"({"n": 1, "atoms": [[0.5]], "weights": [1]})", &mu) == MC_OK);
  mc_moments* half = nullptr;
  REQUIRE(mc_moments_of_measure(mu, 6, &half) == MC_OK);
  CHECK(mc_moments_max_degree(half) == 6);
  Report ok;
  CHECK(mc_pipeline(half, nullptr, 0, 0.0, w, -1, 101, 1e-8, &ok.text, &passed) == MC_OK);
  CHECK(passed == 1);

  Report verify;
  CHECK(mc_verify_representation(half, mu, w, &verify.text) == MC_OK);
  CHECK(verify.parsed()["max_residual"].get<double>() <= 1e-12);

  auto* two_w = make_weight("1", {1.0});
  mc_measure* two = nullptr;
  REQUIRE(mc_measure_parse(R"({"n": 1, "atoms": [[2]], "weights": [1]})", &two) == MC_OK);
  mc_moments* s2 = nullptr;
  REQUIRE(mc_moments_of_measure(two, 6, &s2) == MC_OK);
  Report dual;
  int bounded = -1;
  CHECK(mc_dual_norm(s2, two_w, &dual.text, &bounded) == MC_OK);
  CHECK(bounded == 0);

  mc_moments_free(s2);
  mc_measure_free(two);
  mc_weight_free(two_w);
  mc_moments_free(half);
  mc_measure_free(mu);
  mc_weight_free(w);
  mc_moments_free(s);
}

TEST_CASE("approximation entry points") {
  auto* f = parse_poly(R"({"n": 1, "terms": [{"exp": [0], "coef": 1}, {"exp": [2], "coef": -1}]})");
  auto* w = make_weight("1", {1.0});
  Report r;
  int certified = -1;
  CHECK(mc_sos_approx(f, w, 1.0, 2, nullptr, &r.text, &certified) == MC_OK);
  CHECK(certified == 1);
  CHECK(r.parsed()["distance"].get<double>() == doctest::Approx(2.5));

  const double bad_schedule[] = {0.5, 1.0};
  Report sweep;
  CHECK(mc_convergence_sweep(f, w, bad_schedule, 2, 2, nullptr, &sweep.text, &certified) ==
        MC_ERR_INVALID_ARGUMENT);

  auto* neg = parse_poly(R"({"n": 1, "terms": [{"exp": [0], "coef": -1}]})");
  Report rn;
  CHECK(mc_sos_approx(neg, w, 1.0, 2, nullptr, &rn.text, &certified) == MC_ERR_DOMAIN);
  Report sq;
  CHECK(mc_sqrt_approx(neg, 3, &sq.text) == MC_ERR_DOMAIN);

  Report table;
  CHECK(mc_sqrt_approx(f, 4, &table.text) == MC_OK);
  CHECK(table.parsed()["i"] == 4);

  mc_polynomial_free(neg);
  mc_weight_free(w);
  mc_polynomial_free(f);
}
