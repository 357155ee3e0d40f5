#pragma once

#include "minimaxlab/dynamics.hpp"
#include "minimaxlab/envelope.hpp"
#include "minimaxlab/optimality.hpp"
#include "minimaxlab/quadratic.hpp"
#include "minimaxlab/stability.hpp"

#include <json.hpp>

#include <string>

namespace minimaxlab::io {

using Json = nlohmann::json;

// Sorted keys (nlohmann::json is map-backed), floats at 17 significant digits,
// non-finite numbers as null.
std::string canonical_dump(const Json& j, int indent = 2);

// {"A": [[...]], "B": [[...]], "C": [[...]], "a": [...], "b": [...], "c": 0.0}.
// a, b, c default to zero; 1x1 blocks may be written as bare numbers.
// Throws Parse on malformed input and DimensionMismatch on inconsistent blocks.
QuadraticGame game_from_json(const Json& j);
QuadraticGame game_from_file(const std::string& path);

Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json to_json(const CVec& v);  // [[re, im], ...]
Json to_json(const QuadraticGame& g);
Json to_json(const AffineSet& s);
Json to_json(const ClassificationReport& r);
Json to_json(const VerifyResult& r);
Json to_json(const SecondOrderReport& r);
Json to_json(const StabilityVerdict& v);
Json to_json(const TrajectoryRecord& t);

}  // namespace minimaxlab::io
