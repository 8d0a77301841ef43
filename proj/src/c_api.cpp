#include "momentcone/momentcone.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "momentcone/approx.hpp"
#include "momentcone/error.hpp"
#include "momentcone/io.hpp"
#include "momentcone/measures.hpp"
#include "momentcone/moments.hpp"
#include "momentcone/norms.hpp"
#include "momentcone/polynomial.hpp"

struct mc_polynomial {
  momentcone::Polynomial value;
};
struct mc_moments {
  momentcone::MomentSequence value;
};
struct mc_measure {
  momentcone::AtomicMeasure value;
};
struct mc_weight {
  momentcone::WeightSpec value;
};

namespace {

using momentcone::Error;
using momentcone::ErrorCode;
namespace io = momentcone::io;

thread_local std::string last_error;

mc_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MC_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return MC_ERR_DIMENSION_MISMATCH;
    case ErrorCode::Domain: return MC_ERR_DOMAIN;
    case ErrorCode::InsufficientMoments: return MC_ERR_INSUFFICIENT_MOMENTS;
    case ErrorCode::Parse: return MC_ERR_PARSE;
  }
  return MC_ERR_INTERNAL;
}

template <typename Fn>
mc_status guarded(Fn&& fn) {
  try {
    fn();
    return MC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MC_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const io::json& j, char** report) {
  require(report, "report");
  *report = copy_string(io::dump(j));
}

void set_flag(int* flag, bool value) {
  if (flag != nullptr) *flag = value ? 1 : 0;
}

std::vector<momentcone::Polynomial> collect(const mc_polynomial* const* generators,
                                            size_t count) {
  std::vector<momentcone::Polynomial> out;
  if (count > 0) require(generators, "generators");
  for (size_t k = 0; k < count; ++k) {
    require(generators[k], "generator");
    out.push_back(generators[k]->value);
  }
  return out;
}

momentcone::BoxApproxOptions box_options(const mc_sos_options* options) {
  momentcone::BoxApproxOptions opts;
  if (options != nullptr) {
    if (options->tol > 0.0) opts.sos.tol = options->tol;
    if (options->max_iters > 0) opts.sos.max_iters = options->max_iters;
    opts.seed = options->seed;
  }
  return opts;
}

int default_degree(const mc_moments* s, int d) { return d < 0 ? s->value.max_degree() / 2 : d; }

std::optional<double> tolerance(double tol) {
  return tol > 0.0 ? std::optional<double>(tol) : std::nullopt;
}

io::json psd_json(const momentcone::MomentSequence& s, int d, std::optional<double> tol,
                  bool& pass) {
  const auto m = momentcone::moment_matrix(s, d);
  momentcone::GeneratorCheck check;
  check.label = "1";
  check.generator = momentcone::Polynomial::constant(s.dim(), 1.0);
  check.min_eigenvalue = momentcone::min_eigenvalue(m);
  check.tolerance = tol.value_or(momentcone::default_psd_tolerance(m));
  check.pass = check.min_eigenvalue >= -check.tolerance;
  pass = check.pass;
  return io::json{{"degree", d},
                  {"generators", io::json::array({io::json{{"label", check.label},
                                                           {"generator", "1"},
                                                           {"min_eigenvalue", check.min_eigenvalue},
                                                           {"tolerance", check.tolerance},
                                                           {"pass", check.pass}}})},
                  {"pass", check.pass}};
}

}  // namespace

extern "C" {

const char* mc_version(void) { return "0.1.0"; }

const char* mc_last_error(void) { return last_error.c_str(); }

void mc_string_free(char* s) { std::free(s); }

mc_sos_options mc_sos_options_default(void) { return mc_sos_options{1e-8, 5000, 0}; }

mc_status mc_polynomial_parse(const char* json, mc_polynomial** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new mc_polynomial{io::polynomial_from_json(io::parse(json))};
  });
}

mc_status mc_polynomial_to_json(const mc_polynomial* f, char** out) {
  return guarded([&] {
    require(f, "polynomial");
    emit(io::to_json(f->value), out);
  });
}

void mc_polynomial_free(mc_polynomial* f) { delete f; }

size_t mc_polynomial_dim(const mc_polynomial* f) { return f ? f->value.dim() : 0; }

int mc_polynomial_degree(const mc_polynomial* f) { return f ? f->value.degree() : -1; }

mc_status mc_polynomial_eval(const mc_polynomial* f, const double* x, size_t n, double* out) {
  return guarded([&] {
    require(f, "polynomial");
    require(out, "out");
    if (n > 0) require(x, "x");
    *out = momentcone::evaluate(f->value, std::span<const double>(x, n));
  });
}

mc_status mc_weight_create(const char* p, const double* r, size_t n, mc_weight** out) {
  return guarded([&] {
    require(p, "p");
    require(out, "out");
    if (n > 0) require(r, "r");
    *out = new mc_weight{momentcone::WeightSpec(momentcone::Exponent::parse(p),
                                                std::vector<double>(r, r + n))};
  });
}

void mc_weight_free(mc_weight* w) { delete w; }

size_t mc_weight_dim(const mc_weight* w) { return w ? w->value.dim() : 0; }

mc_status mc_weighted_norm(const mc_polynomial* s, const mc_weight* w, double* out) {
  return guarded([&] {
    require(s, "sequence");
    require(w, "weight");
    require(out, "out");
    *out = momentcone::weighted_norm(s->value, w->value);
  });
}

mc_status mc_eval_sequence_norm(const double* x, size_t n, const mc_weight* w, double* out) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    if (n > 0) require(x, "x");
    *out = momentcone::eval_sequence_norm(std::span<const double>(x, n), w->value);
  });
}

mc_status mc_is_evaluation_continuous(const double* x, size_t n, const mc_weight* w, int* out) {
  return guarded([&] {
    require(w, "weight");
    require(out, "out");
    if (n > 0) require(x, "x");
    *out = momentcone::is_evaluation_continuous(std::span<const double>(x, n), w->value) ? 1 : 0;
  });
}

mc_status mc_moments_parse(const char* json, mc_moments** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new mc_moments{io::moments_from_json(io::parse(json))};
  });
}

mc_status mc_moments_to_json(const mc_moments* s, char** out) {
  return guarded([&] {
    require(s, "moments");
    emit(io::to_json(s->value), out);
  });
}

void mc_moments_free(mc_moments* s) { delete s; }

size_t mc_moments_dim(const mc_moments* s) { return s ? s->value.dim() : 0; }

int mc_moments_max_degree(const mc_moments* s) { return s ? s->value.max_degree() : -1; }

mc_status mc_measure_parse(const char* json, mc_measure** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new mc_measure{io::measure_from_json(io::parse(json))};
  });
}

void mc_measure_free(mc_measure* mu) { delete mu; }

mc_status mc_moments_of_measure(const mc_measure* mu, int max_degree, mc_moments** out) {
  return guarded([&] {
    require(mu, "measure");
    require(out, "out");
    *out = new mc_moments{momentcone::moments_of_measure(mu->value, max_degree)};
  });
}

mc_status mc_psd_check(const mc_moments* s, int d, double tol, char** report, int* passed) {
  return guarded([&] {
    require(s, "moments");
    bool pass = false;
    io::json j = psd_json(s->value, default_degree(s, d), tolerance(tol), pass);
    emit(j, report);
    set_flag(passed, pass);
  });
}

mc_status mc_qm_check(const mc_moments* s, const mc_polynomial* const* generators, size_t count,
                      double archimedean_bound, int d, double tol, char** report, int* passed) {
  return guarded([&] {
    require(s, "moments");
    const auto gens = collect(generators, count);
    int degree = d;
    if (degree < 0) {
      // largest d that every generator admits
      int widest = 2;
      for (const auto& g : gens) widest = std::max(widest, g.degree());
      degree = (s->value.max_degree() - widest) / 2;
    }
    const auto result = momentcone::check_quadratic_module(s->value, gens, archimedean_bound,
                                                           degree, tolerance(tol));
    emit(io::to_json(result), report);
    set_flag(passed, result.pass);
  });
}

mc_status mc_dual_norm(const mc_moments* s, const mc_weight* w, char** report, int* bounded) {
  return guarded([&] {
    require(s, "moments");
    require(w, "weight");
    const auto result = momentcone::dual_norm_of_moments(s->value, w->value);
    emit(io::to_json(result), report);
    set_flag(bounded, !result.growing);
  });
}

mc_status mc_sqrt_approx(const mc_polynomial* f, int i, char** report) {
  return guarded([&] {
    require(f, "polynomial");
    const auto h = momentcone::sqrt_square_approx(f->value, i);
    const auto table = momentcone::coefficientwise_report(f->value, i);
    io::json j{{"i", i},
               {"h", io::to_json(h)},
               {"h_text", h.to_string()},
               {"table", io::to_json(table)}};
    emit(j, report);
  });
}

mc_status mc_sos_approx(const mc_polynomial* f, const mc_weight* w, double epsilon, int d_max,
                        const mc_sos_options* options, char** report, int* certified) {
  return guarded([&] {
    require(f, "polynomial");
    require(w, "weight");
    const auto result =
        momentcone::box_sos_approx(f->value, w->value, epsilon, d_max, box_options(options));
    emit(io::to_json(result, w->value), report);
    set_flag(certified, result.certified);
  });
}

mc_status mc_convergence_sweep(const mc_polynomial* f, const mc_weight* w,
                               const double* epsilons, size_t count, int d_max,
                               const mc_sos_options* options, char** report,
                               int* all_certified) {
  return guarded([&] {
    require(f, "polynomial");
    require(w, "weight");
    if (count > 0) require(epsilons, "epsilons");
    const auto result = momentcone::convergence_sweep(
        f->value, w->value, std::span<const double>(epsilons, count), d_max, box_options(options));
    emit(io::to_json(result), report);
    bool all = true;
    for (const auto& run : result.runs) all = all && run.certified;
    set_flag(all_certified, all);
  });
}

mc_status mc_recover_measure(const mc_moments* s, const mc_weight* w, int grid, double tol,
                             char** report, int* success) {
  return guarded([&] {
    require(s, "moments");
    require(w, "weight");
    momentcone::RecoveryOptions opts;
    opts.grid_points = grid;
    if (tol > 0.0) opts.tol = tol;
    const auto result =
        momentcone::recover_measure(s->value, momentcone::box_from_weight(w->value), opts);
    emit(io::to_json(result), report);
    set_flag(success, result.success);
  });
}

mc_status mc_verify_representation(const mc_moments* s, const mc_measure* mu,
                                   const mc_weight* box_weight, char** report) {
  return guarded([&] {
    require(s, "moments");
    require(mu, "measure");
    std::optional<momentcone::BoxSpec> box;
    if (box_weight != nullptr) box = momentcone::box_from_weight(box_weight->value);
    emit(io::to_json(momentcone::verify_representation(s->value, mu->value, box)), report);
  });
}

mc_status mc_pipeline(const mc_moments* s, const mc_polynomial* const* generators, size_t count,
                      double archimedean_bound, const mc_weight* w, int d, int grid, double tol,
                      char** report, int* passed) {
  return guarded([&] {
    require(s, "moments");
    require(w, "weight");
    const auto gens = collect(generators, count);
    const int degree = default_degree(s, d);
    io::json j = io::json::object();
    bool all = true;

    // each stage reports on its own; a failing stage does not stop the next
    auto stage = [&](const char* name, auto&& body) {
      try {
        body();
      } catch (const Error& e) {
        j[name] = io::json{{"error", e.what()}, {"pass", false}};
        all = false;
      }
    };

    stage("hypothesis", [&] {
      const auto dual = momentcone::dual_norm_of_moments(s->value, w->value);
      io::json h = io::to_json(dual);
      h["pass"] = !dual.growing;
      all = all && !dual.growing;
      j["hypothesis"] = std::move(h);
    });
    stage("psd", [&] {
      bool pass = false;
      j["psd"] = psd_json(s->value, degree, std::nullopt, pass);
      all = all && pass;
    });
    if (!gens.empty()) {
      stage("quadratic_module", [&] {
        int widest = 2;
        for (const auto& g : gens) widest = std::max(widest, g.degree());
        const int qd = std::min(degree, (s->value.max_degree() - widest) / 2);
        const auto qm = momentcone::check_quadratic_module(s->value, gens, archimedean_bound, qd);
        j["quadratic_module"] = io::to_json(qm);
        all = all && qm.pass;
      });
    }
    stage("recovery", [&] {
      momentcone::RecoveryOptions opts;
      opts.grid_points = grid;
      if (tol > 0.0) opts.tol = tol;
      const auto rec =
          momentcone::recover_measure(s->value, momentcone::box_from_weight(w->value), opts);
      io::json r = io::to_json(rec);
      r["pass"] = rec.success;
      all = all && rec.success;
      j["recovery"] = std::move(r);
    });
    j["weight"] = io::to_json(w->value);
    j["pass"] = all;
    emit(j, report);
    set_flag(passed, all);
  });
}

}  // extern "C"
