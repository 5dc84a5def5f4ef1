#include "battlife/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "battlife/errors.hpp"

namespace battlife {

double parse_duration_min(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) throw ValidationError("empty duration");

    std::size_t pos = 0;
    double value = 0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ValidationError("bad duration '" + std::string(text) + "'");
    }
    std::string suffix = s.substr(pos);

    double scale = 1.0;
    if (suffix.empty() || suffix == "min") {
        scale = 1.0;
    } else if (suffix == "s") {
        scale = 1.0 / 60.0;
    } else if (suffix == "h") {
        scale = 60.0;
    } else if (suffix == "d") {
        scale = 1440.0;
    } else {
        throw ValidationError("bad duration suffix '" + suffix +
                              "' (use s, min, h or d)");
    }
    double minutes = value * scale;
    if (!std::isfinite(minutes) || minutes < 0) {
        throw ValidationError("duration out of range '" + std::string(text) +
                              "'");
    }
    return minutes;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    std::string out = buf;
    if (out.find_first_of("123456789") == std::string::npos &&
        !out.empty() && out[0] == '-') {
        out.erase(0, 1);
    }
    return out;
}

} // namespace battlife
