#pragma once

#include <charconv>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace oceansrc {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
void write_double(std::ostream& out, double v);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_uint(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace oceansrc
