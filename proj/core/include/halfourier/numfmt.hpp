#pragma once

// Locale-free float formatting. Shortest decimal string that parses back to
// the same double, so emitted CSV round-trips exactly and output is
// byte-stable across runs.

#include <charconv>
#include <string>

namespace halfourier {

inline std::string format_double(double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, r.ptr);
}

}  // namespace halfourier
