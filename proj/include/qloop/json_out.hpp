#pragma once

#include <string>

#include <json.hpp>

namespace qloop {

std::string format_double17(double v);

/// Deterministic dump: insertion key order, floats at 17 significant digits,
/// trailing newline.
std::string dump_deterministic(const nlohmann::ordered_json& j);

}  // namespace qloop
