#pragma once

#include <vector>

#include <json.hpp>

#include "sonc/bench.hpp"
#include "sonc/certify.hpp"
#include "sonc/pipeline.hpp"
#include "sonc/socp_builder.hpp"

namespace sonc::io {

using nlohmann::json;

/// Exponents are arrays of "p/q" strings.
json to_json(const Exponent& e);
Exponent exponent_from_json(const json& j);

json to_json(const Certificate& cert);
/// Throws std::invalid_argument on a malformed document.
Certificate certificate_from_json(const json& j);

json to_json(const VerifyReport& r);
json to_json(const PipelineReport& r);

json to_json(const BenchSpec& s);
BenchSpec bench_spec_from_json(const json& j);
/// Either a bare array of specs or {"specs": [...]}.
std::vector<BenchSpec> bench_specs_from_json(const json& j);

} // namespace sonc::io
