#pragma once

#include <string>
#include <vector>

namespace fogsim {

// Shortest-faithful text form of a double: 17 significant digits, which
// round-trips IEEE 754 binary64 exactly through parse_double.
std::string format_double(double v);

double parse_double(const std::string& text);

// Minimal CSV support for the fixed schemas this project emits: plain
// comma-separated fields, no quoting (field values never contain commas).
std::string join_csv(const std::vector<std::string>& fields);
std::vector<std::string> split_csv(const std::string& line);

}  // namespace fogsim
