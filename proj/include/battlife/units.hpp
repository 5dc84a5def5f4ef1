#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace battlife {

// The model runs in minutes and mA*min. Charge micro-units (used by the
// integer estimator) are 1e-3 mA*ms, i.e. uA*ms.
inline constexpr double kMsPerMin = 60000.0;
inline constexpr std::int64_t kMicroUnitsPerMilliAmpMin = 60000; // uA*ms per 1e-3 mA*min

inline constexpr double ms_to_min(double ms) { return ms / kMsPerMin; }
inline constexpr double min_to_ms(double min) { return min * kMsPerMin; }
inline constexpr double mah_to_mamin(double mah) { return mah * 60.0; }

/// Parse a duration like "90s", "10min", "60h", "2d"; a bare number is minutes.
/// Returns minutes. Throws ValidationError on junk or negative values.
double parse_duration_min(std::string_view text);

/// Fixed-width decimal formatting used by every CSV writer, so identical runs
/// produce identical bytes.
std::string format_fixed(double value, int decimals);

} // namespace battlife
