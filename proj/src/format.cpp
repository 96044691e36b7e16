#include "assaylens/format.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

namespace assaylens {

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, end);
}

std::string format_fixed(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    return buf;
}

std::string format_general(double value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

bool log_enabled() {
    static const bool enabled = [] {
        const char* v = std::getenv("ASSAYLENS_LOG");
        return v != nullptr && v[0] != '\0' && std::strcmp(v, "0") != 0;
    }();
    return enabled;
}

void log_line(const std::string& message) {
    if (log_enabled())
        std::cerr << "assaylens: " << message << "\n";
}

} // namespace assaylens
