#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace kw {

using ReportJson = nlohmann::ordered_json;

// "%.17g" for floating values, null for NaN and infinities.
std::string format_double(double x);
// Like ReportJson::dump but with 17 significant digits for every float.
std::string dump_report(const ReportJson& j, int indent = 2);

std::string fnv1a_digest(std::string_view data);

// {"schema": 1, "command": ..., "inputs": {"digest": ...}}
ReportJson make_report(std::string_view command, std::string_view digest);

}  // namespace kw
