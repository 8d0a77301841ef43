#include "momentcone/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "momentcone/error.hpp"

namespace momentcone::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) fail("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t read_dim(const json& j) {
  const json& n = field(j, "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) fail("\"n\" must be a positive integer");
  return static_cast<std::size_t>(n.get<long long>());
}

double read_real(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string("\"") + what + "\" must be a number");
  return j.get<double>();
}

MultiIndex read_exponent(const json& j, std::size_t n) {
  if (!j.is_array()) fail("\"exp\" must be an array");
  if (j.size() != n) {
    fail("exponent array has length " + std::to_string(j.size()) + ", expected " +
         std::to_string(n));
  }
  std::vector<std::uint32_t> e;
  e.reserve(n);
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail("exponents must be nonnegative integers");
    }
    e.push_back(static_cast<std::uint32_t>(v.get<long long>()));
  }
  return MultiIndex(std::move(e));
}

json exponent_json(const MultiIndex& alpha) {
  json e = json::array();
  for (auto v : alpha.exponents()) e.push_back(v);
  return e;
}

json vector_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

void write_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"+inf\"" : "\"-inf\"";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
}

void write(std::string& out, const json& j, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, v, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

json generator_json(const GeneratorCheck& c) {
  return json{{"label", c.label},
              {"generator", c.generator.to_string()},
              {"min_eigenvalue", c.min_eigenvalue},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

Polynomial polynomial_from_json(const json& j) {
  const std::size_t n = read_dim(j);
  const json& terms = field(j, "terms");
  if (!terms.is_array()) fail("\"terms\" must be an array");
  std::vector<std::pair<MultiIndex, double>> parsed;
  parsed.reserve(terms.size());
  for (const auto& t : terms) {
    parsed.emplace_back(read_exponent(field(t, "exp"), n), read_real(field(t, "coef"), "coef"));
  }
  return Polynomial::from_terms(n, parsed);
}

json to_json(const Polynomial& f) {
  json terms = json::array();
  for (const auto& [alpha, c] : f.terms()) {
    terms.push_back(json{{"exp", exponent_json(alpha)}, {"coef", c}});
  }
  return json{{"n", f.dim()}, {"terms", std::move(terms)}};
}

MomentSequence moments_from_json(const json& j) {
  const std::size_t n = read_dim(j);
  const json& md = field(j, "max_degree");
  if (!md.is_number_integer() || md.get<long long>() < 0) {
    fail("\"max_degree\" must be a nonnegative integer");
  }
  const json& values = field(j, "values");
  if (!values.is_array()) fail("\"values\" must be an array");
  std::vector<std::pair<MultiIndex, double>> entries;
  for (const auto& v : values) {
    entries.emplace_back(read_exponent(field(v, "exp"), n), read_real(field(v, "s"), "s"));
  }
  return MomentSequence::from_entries(n, static_cast<int>(md.get<long long>()), entries);
}

json to_json(const MomentSequence& s) {
  json values = json::array();
  for (std::size_t k = 0; k < s.basis().size(); ++k) {
    values.push_back(json{{"exp", exponent_json(s.basis()[k])}, {"s", s.values()[k]}});
  }
  return json{{"n", s.dim()}, {"max_degree", s.max_degree()}, {"values", std::move(values)}};
}

AtomicMeasure measure_from_json(const json& j) {
  const std::size_t n = read_dim(j);
  const json& atoms = field(j, "atoms");
  const json& weights = field(j, "weights");
  if (!atoms.is_array() || !weights.is_array()) fail("\"atoms\" and \"weights\" must be arrays");
  std::vector<std::vector<double>> xs;
  for (const auto& a : atoms) {
    if (!a.is_array() || a.size() != n) fail("each atom must be an array of length n");
    std::vector<double> x;
    for (const auto& v : a) x.push_back(read_real(v, "atom"));
    xs.push_back(std::move(x));
  }
  std::vector<double> ws;
  for (const auto& v : weights) ws.push_back(read_real(v, "weight"));
  return AtomicMeasure(n, std::move(xs), std::move(ws));
}

json to_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& x : mu.atoms()) atoms.push_back(vector_json(x));
  return json{{"n", mu.dim()}, {"atoms", std::move(atoms)}, {"weights", vector_json(mu.weights())}};
}

json to_json(const BoxSpec& box) {
  return json{{"lower", vector_json(box.lower)}, {"upper", vector_json(box.upper)}};
}

json to_json(const WeightSpec& w) {
  return json{{"p", w.p.to_string()}, {"r", vector_json(w.r)}};
}

json to_json(const QuadraticModuleReport& report) {
  json gens = json::array();
  for (const auto& c : report.checks) gens.push_back(generator_json(c));
  return json{{"degree", report.degree},
              {"N", report.archimedean_bound},
              {"generators", std::move(gens)},
              {"pass", report.pass}};
}

json to_json(const DualNormReport& report) {
  return json{{"q", report.q.to_string()},
              {"value", report.value},
              {"truncation_degree", report.truncation_degree},
              {"shells", vector_json(report.shells)},
              {"growing", report.growing}};
}

json to_json(const CoefficientwiseReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back(json{{"i", s.i},
                         {"max_error", s.max_error},
                         {"constant_error", s.constant_error},
                         {"off_constant_error", s.off_constant_error}});
  }
  return json{{"f", report.target.to_string()}, {"errors", std::move(steps)}};
}

json to_json(const BoxApproxResult& result, const WeightSpec& w) {
  json factors = json::array();
  for (const auto& g : result.factors) factors.push_back(to_json(g));
  json out{{"certified", result.certified},
           {"epsilon", result.epsilon},
           {"weight", to_json(w)},
           {"box", to_json(box_from_weight(w))},
           {"D", result.perturbation_degree},
           {"perturbation", to_string(result.family)},
           {"factors", std::move(factors)},
           {"gram_mineig", nullptr},
           {"residual", result.residual}};
  if (result.certified) {
    out["gram_mineig"] = result.unit_box_certificate->gram_min_eigenvalue;
    out["distance"] = result.distance;
    out["unit_box_distance"] = result.unit_box_distance;
  } else {
    out["distance"] = nullptr;
    out["unit_box_distance"] = nullptr;
  }
  return out;
}

json to_json(const SweepReport& report) {
  json runs = json::array();
  for (const auto& r : report.runs) runs.push_back(to_json(r, report.target));
  return json{{"weight", to_json(report.target)}, {"runs", std::move(runs)}, {"monotone", report.monotone}};
}

json to_json(const RecoveryResult& result) {
  json atoms = json::array();
  json weights = json::array();
  if (result.measure) {
    for (const auto& x : result.measure->atoms()) atoms.push_back(vector_json(x));
    weights = vector_json(result.measure->weights());
  }
  return json{{"success", result.success},
              {"atoms", std::move(atoms)},
              {"weights", std::move(weights)},
              {"residual", result.residual},
              {"iterations", result.iterations},
              {"box", to_json(result.box)}};
}

json to_json(const RepresentationReport& report) {
  return json{{"max_residual", report.max_residual},
              {"residuals", vector_json(report.residuals)},
              {"atoms_in_box", report.atoms_in_box}};
}

std::string dump(const json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.13g", v);
  return buf;
}

}  // namespace momentcone::io
