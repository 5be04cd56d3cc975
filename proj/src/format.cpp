#include "sle/format.hpp"

#include "sle/errors.hpp"

#include <charconv>
#include <system_error>

namespace sle {

std::string format_double(double x) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
    if (ec != std::errc{}) return "nan";
    return std::string(buffer, end);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ValidationError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

} // namespace sle
