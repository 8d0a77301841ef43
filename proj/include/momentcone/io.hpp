#pragma once

#include <string>

#include <json.hpp>

#include "momentcone/approx.hpp"
#include "momentcone/measures.hpp"
#include "momentcone/moments.hpp"
#include "momentcone/norms.hpp"
#include "momentcone/polynomial.hpp"

namespace momentcone::io {

using json = nlohmann::ordered_json;

/// Parses text into JSON, mapping syntax errors to Error(Parse).
json parse(const std::string& text);

// {"n": int, "terms": [{"exp": [...], "coef": number}, ...]}
Polynomial polynomial_from_json(const json& j);
json to_json(const Polynomial& f);

// {"n": int, "max_degree": int, "values": [{"exp": [...], "s": number}, ...]}
MomentSequence moments_from_json(const json& j);
json to_json(const MomentSequence& s);

// {"n": int, "atoms": [[...], ...], "weights": [...]}
AtomicMeasure measure_from_json(const json& j);
json to_json(const AtomicMeasure& mu);

json to_json(const BoxSpec& box);
json to_json(const WeightSpec& w);
json to_json(const QuadraticModuleReport& report);
json to_json(const DualNormReport& report);
json to_json(const CoefficientwiseReport& report);
json to_json(const BoxApproxResult& result, const WeightSpec& w);
json to_json(const SweepReport& report);
json to_json(const RecoveryResult& result);
json to_json(const RepresentationReport& report);

/// Serializes with every floating-point number at 17 significant digits;
/// non-finite values become the strings "+inf", "-inf", "nan".
std::string dump(const json& j, int indent = 2);

/// A real with 13 significant digits, or "+inf".
std::string format_number(double v);

}  // namespace momentcone::io
