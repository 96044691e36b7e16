#pragma once

#include <string>

namespace assaylens {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Fixed-width form for human-readable reports, e.g. format_fixed(1.23456, 3).
std::string format_fixed(double value, int precision);

// Significant-digit form that stays readable across decades, e.g.
// format_general(1.23e-8, 6) -> "1.23e-08".
std::string format_general(double value, int significant_digits);

// True when the ASSAYLENS_LOG environment variable requests verbose output.
bool log_enabled();

// Writes one diagnostic line to stderr when logging is enabled.
void log_line(const std::string& message);

} // namespace assaylens
