#pragma once

#include <string>
#include <string_view>

namespace sle {

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

/// Strict full-string parse; throws ValidationError.
double parse_double(std::string_view text);

} // namespace sle
