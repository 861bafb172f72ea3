#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stancesum {

// Shortest round-trip representation ("%.17g"), stable across runs.
std::string format_double(double value);

// Strict parse; throws FormatError on trailing garbage or empty input.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split_tabs(std::string_view line);

}  // namespace stancesum
