#pragma once

#include <cstdio>
#include <string>

namespace seqa {

// 17 significant digits: enough for binary64 round trips, so every file we
// write loads back bit-identically.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& what);
long parse_long(const std::string& s, const std::string& what);

} // namespace seqa
