#pragma once

// JSON and CSV renderings of the check reports, and PairSpec input.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmv/gallery.hpp"

namespace cmv {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Pretty-prints with two-space indentation. Floats use 17 significant
/// digits; non-finite floats become null.
std::string dump(const Json& j);

/// Shortest "%.17g" rendering used by both JSON and CSV output.
std::string format_double(double v);

Json to_json(const Point& p);
Json to_json(const Vec3& v);
Json to_json(const Mat3& m);
Json to_json(const Mat2& m);

Json to_json(const CompatReport& r);
Json to_json(const LemmaResidualReport& r);
Json to_json(const VerdictReport& r);
Json to_json(const UmbilicScan& s);

/// Γ, R and coordinate-plane sectional curvatures at a point.
Json curvature_dump(const MetricField& g, const Point& p, const ParamTable& params);

std::string compat_csv(const CompatReport& r);
std::string lemma_csv(const std::vector<LemmaResidualReport>& rows);
/// One row per grid point, ordered as in the report.
std::string verdict_csv(const VerdictReport& r);
std::string umbilic_csv(const UmbilicScan& s);

/// Reads a PairSpec document:
///   {"name": str, "parameters": {str: number}, "metric": [[str|null x3] x3],
///    "alpha": [str x3], "domain": {"min": [3 numbers], "max": [3 numbers]}}
/// A metric entry may be null when its mirror is given; when both are given
/// they must parse to the same tree. `overrides` replace declared parameters.
/// Throws Error{Schema} and the parser's errors.
Pair parse_pair_spec(std::string_view text, const ParamTable& overrides = {});

}  // namespace cmv
