// momentcone command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentcone/momentcone.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitCheckFailed = 2;

struct CliError : std::runtime_error {
  explicit CliError(const std::string& what, mc_status status = MC_ERR_INVALID_ARGUMENT)
      : std::runtime_error(what), status(status) {}
  mc_status status;
};

void check(mc_status status, const std::string& context) {
  if (status != MC_OK) throw CliError(context + ": " + mc_last_error(), status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using PolyPtr = std::unique_ptr<mc_polynomial, Deleter<mc_polynomial, mc_polynomial_free>>;
using MomentsPtr = std::unique_ptr<mc_moments, Deleter<mc_moments, mc_moments_free>>;
using MeasurePtr = std::unique_ptr<mc_measure, Deleter<mc_measure, mc_measure_free>>;
using WeightPtr = std::unique_ptr<mc_weight, Deleter<mc_weight, mc_weight_free>>;
using StringPtr = std::unique_ptr<char, Deleter<char, mc_string_free>>;

PolyPtr load_polynomial(const std::string& path) {
  mc_polynomial* f = nullptr;
  check(mc_polynomial_parse(read_file(path).c_str(), &f), path);
  return PolyPtr(f);
}

MomentsPtr load_moments(const std::string& path) {
  mc_moments* s = nullptr;
  check(mc_moments_parse(read_file(path).c_str(), &s), path);
  return MomentsPtr(s);
}

MeasurePtr load_measure(const std::string& path) {
  mc_measure* mu = nullptr;
  check(mc_measure_parse(read_file(path).c_str(), &mu), path);
  return MeasurePtr(mu);
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError("cannot parse " + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw CliError(what + " is empty");
  return out;
}

// A single r value is broadcast to every axis.
WeightPtr make_weight(const std::string& p, const std::string& r_text, std::size_t n) {
  std::vector<double> r = parse_list(r_text, "--r");
  if (r.size() == 1 && n > 1) r.assign(n, r[0]);
  if (r.size() != n) {
    throw CliError("--r has " + std::to_string(r.size()) + " entries, dimension is " +
                   std::to_string(n));
  }
  mc_weight* w = nullptr;
  check(mc_weight_create(p.c_str(), r.data(), r.size(), &w), "weight");
  return WeightPtr(w);
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.13g", v);
  return buf;
}

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text << '\n';
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("cannot write " + path);
    out << text << '\n';
  }
};

struct SosFlags {
  double tol = 1e-8;
  int max_iters = 5000;
  unsigned long long seed = 0;

  mc_sos_options options() const { return mc_sos_options{tol, max_iters, seed}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"momentcone: weighted norms, moment matrices, SOS approximation and measure recovery"};
  app.require_subcommand(1);
  Output output;
  app.add_option("-o,--out", output.path, "Write the result to this file instead of stdout");

  std::string f_path, moments_path, measure_path, p = "1", r = "1", x_text, eps_text = "0.1";
  std::vector<std::string> generator_paths;
  int d = -1, i = 10, dmax = 6, grid = 51, degree = 4;
  double tol = 0.0, archimedean = -1.0, rec_tol = 1e-6;
  SosFlags sos;

  auto add_weight = [&](CLI::App* cmd) {
    cmd->add_option("--p", p, "Exponent p: decimal, a/b or inf")->capture_default_str();
    cmd->add_option("--r", r, "Comma-separated weights r_i (one value is broadcast)")
        ->capture_default_str();
  };

  auto* norm = app.add_subcommand("norm", "Weighted norm ||f||_{p,r} of a polynomial");
  norm->add_option("--f", f_path, "Polynomial JSON file")->required();
  add_weight(norm);

  auto* eval = app.add_subcommand("eval-cont", "Continuity of evaluation at x in ||.||_{p,r}");
  eval->add_option("--x", x_text, "Comma-separated point")->required();
  add_weight(eval);

  auto* psd = app.add_subcommand("psd-check", "PSD test of the moment matrix");
  psd->add_option("--moments", moments_path, "Moment JSON file")->required();
  psd->add_option("--d", d, "Matrix degree (default max_degree/2)");
  psd->add_option("--tol", tol, "Eigenvalue tolerance (default scale-aware)");

  auto* qm = app.add_subcommand("qm-check", "Localized PSD checks for a quadratic module");
  qm->add_option("--moments", moments_path, "Moment JSON file")->required();
  qm->add_option("--S", generator_paths, "Generator polynomial JSON files");
  qm->add_option("--N", archimedean, "Bound N in the generator N - sum x_i^2")->required();
  qm->add_option("--d", d, "Matrix degree (default: largest admissible)");
  qm->add_option("--tol", tol, "Eigenvalue tolerance (default scale-aware)");

  auto* sqrt_cmd = app.add_subcommand("sqrt-approx", "Truncated square roots h_i of 1/i + f");
  sqrt_cmd->add_option("--f", f_path, "Polynomial JSON file")->required();
  sqrt_cmd->add_option("--i", i, "Index i >= 1")->capture_default_str();

  auto* sos_cmd = app.add_subcommand("sos-approx", "SOS approximation on the box of (p, r)");
  sos_cmd->add_option("--f", f_path, "Polynomial JSON file")->required();
  add_weight(sos_cmd);
  sos_cmd->add_option("--eps", eps_text, "Perturbation size, or a decreasing comma list")
      ->capture_default_str();
  sos_cmd->add_option("--dmax", dmax, "Largest perturbation degree")->capture_default_str();
  sos_cmd->add_option("--tol", sos.tol, "Certificate residual tolerance")->capture_default_str();
  sos_cmd->add_option("--max-iters", sos.max_iters, "Alternating projection cap")
      ->capture_default_str();
  sos_cmd->add_option("--seed", sos.seed, "Seed of the nonnegativity screen")->capture_default_str();

  auto* rec = app.add_subcommand("recover-measure", "Atomic measure on the box of (p, r)");
  rec->add_option("--moments", moments_path, "Moment JSON file")->required();
  add_weight(rec);
  rec->add_option("--grid", grid, "Grid points per axis")->capture_default_str();
  rec->add_option("--tol", rec_tol, "Residual tolerance")->capture_default_str();

  auto* pipe = app.add_subcommand("pipeline", "Hypothesis, PSD and recovery in one report");
  pipe->add_option("--moments", moments_path, "Moment JSON file")->required();
  pipe->add_option("--S", generator_paths, "Generator polynomial JSON files");
  pipe->add_option("--N", archimedean, "Bound N for the localized checks (needed with --S)");
  add_weight(pipe);
  pipe->add_option("--d", d, "Moment matrix degree (default max_degree/2)");
  pipe->add_option("--grid", grid, "Grid points per axis")->capture_default_str();
  pipe->add_option("--tol", rec_tol, "Recovery residual tolerance")->capture_default_str();

  auto* mom = app.add_subcommand("moments", "Moments of an atomic measure");
  mom->add_option("--measure", measure_path, "Measure JSON file")->required();
  mom->add_option("--degree", degree, "Maximum total degree")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitIo;
  }

  auto report = [&](char* raw) {
    StringPtr text(raw);
    output.write(text.get());
  };

  try {
    if (*norm) {
      auto f = load_polynomial(f_path);
      auto w = make_weight(p, r, mc_polynomial_dim(f.get()));
      double value = 0.0;
      check(mc_weighted_norm(f.get(), w.get(), &value), "norm");
      output.write(format_number(value));
      return kExitOk;
    }
    if (*eval) {
      const auto x = parse_list(x_text, "--x");
      auto w = make_weight(p, r, x.size());
      double value = 0.0;
      int continuous = 0;
      check(mc_eval_sequence_norm(x.data(), x.size(), w.get(), &value), "eval-cont");
      check(mc_is_evaluation_continuous(x.data(), x.size(), w.get(), &continuous), "eval-cont");
      output.write(std::string(continuous ? "continuous" : "not continuous") +
                   ", dual_norm=" + format_number(value));
      return continuous ? kExitOk : kExitCheckFailed;
    }
    if (*psd) {
      auto s = load_moments(moments_path);
      char* text = nullptr;
      int passed = 0;
      check(mc_psd_check(s.get(), d, tol, &text, &passed), "psd-check");
      report(text);
      return passed ? kExitOk : kExitCheckFailed;
    }
    if (*qm) {
      auto s = load_moments(moments_path);
      std::vector<PolyPtr> owned;
      std::vector<const mc_polynomial*> gens;
      for (const auto& path : generator_paths) {
        owned.push_back(load_polynomial(path));
        gens.push_back(owned.back().get());
      }
      char* text = nullptr;
      int passed = 0;
      check(mc_qm_check(s.get(), gens.data(), gens.size(), archimedean, d, tol, &text, &passed),
            "qm-check");
      report(text);
      return passed ? kExitOk : kExitCheckFailed;
    }
    if (*sqrt_cmd) {
      auto f = load_polynomial(f_path);
      char* text = nullptr;
      check(mc_sqrt_approx(f.get(), i, &text), "sqrt-approx");
      report(text);
      return kExitOk;
    }
    if (*sos_cmd) {
      auto f = load_polynomial(f_path);
      auto w = make_weight(p, r, mc_polynomial_dim(f.get()));
      const auto eps = parse_list(eps_text, "--eps");
      const mc_sos_options opts = sos.options();
      char* text = nullptr;
      int ok = 0;
      if (eps.size() == 1) {
        check(mc_sos_approx(f.get(), w.get(), eps[0], dmax, &opts, &text, &ok), "sos-approx");
      } else {
        check(mc_convergence_sweep(f.get(), w.get(), eps.data(), eps.size(), dmax, &opts, &text, &ok),
              "sos-approx");
      }
      report(text);
      return ok ? kExitOk : kExitCheckFailed;
    }
    if (*rec) {
      auto s = load_moments(moments_path);
      auto w = make_weight(p, r, mc_moments_dim(s.get()));
      char* text = nullptr;
      int ok = 0;
      check(mc_recover_measure(s.get(), w.get(), grid, rec_tol, &text, &ok), "recover-measure");
      report(text);
      return ok ? kExitOk : kExitCheckFailed;
    }
    if (*pipe) {
      auto s = load_moments(moments_path);
      auto w = make_weight(p, r, mc_moments_dim(s.get()));
      std::vector<PolyPtr> owned;
      std::vector<const mc_polynomial*> gens;
      for (const auto& path : generator_paths) {
        owned.push_back(load_polynomial(path));
        gens.push_back(owned.back().get());
      }
      if (!gens.empty() && archimedean < 0.0) throw CliError("--S requires --N");
      char* text = nullptr;
      int passed = 0;
      check(mc_pipeline(s.get(), gens.data(), gens.size(), archimedean, w.get(), d, grid, rec_tol,
                        &text, &passed),
            "pipeline");
      report(text);
      return passed ? kExitOk : kExitCheckFailed;
    }
    if (*mom) {
      auto mu = load_measure(measure_path);
      mc_moments* s = nullptr;
      check(mc_moments_of_measure(mu.get(), degree, &s), "moments");
      MomentsPtr owned(s);
      char* text = nullptr;
      check(mc_moments_to_json(s, &text), "moments");
      report(text);
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    // a violated mathematical precondition is a failed check, not an I/O problem
    return e.status == MC_ERR_DOMAIN ? kExitCheckFailed : kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitIo;
}
