#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "depthlab/distributions.hpp"
#include "depthlab/mixing.hpp"

namespace depthlab {

inline constexpr const char* kVersion = "0.1.0";

// {"offset": int, "masses": [float], "truncated_tail": float}
void to_json(nlohmann::json& j, const Pmf& p);
void from_json(const nlohmann::json& j, Pmf& p);

// {"type": "discrete", "atoms": [{"location", "weight"}]} or
// {"type": "reflected_exponential", "c": float}
nlohmann::json measure_to_json(const MixingMeasure& nu);
MixingMeasure measure_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const BoundReport& r);

/// Pmf fields plus {"metadata": {n, l, operation, version}}.
nlohmann::json pmf_document(const Pmf& p, std::int64_t n, std::int64_t l, const std::string& operation);

/// 17 significant digits, '.' separator regardless of locale.
std::string format_double(double x);

}  // namespace depthlab
