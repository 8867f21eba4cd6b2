#pragma once

#include <string>
#include <string_view>

namespace etsmc {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a full token; throws std::invalid_argument on failure.
double parse_double(std::string_view s);

}  // namespace etsmc
