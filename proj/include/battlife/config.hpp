#pragma once

#include <map>
#include <string>
#include <string_view>

#include "battlife/params.hpp"

namespace battlife {

/// Parsed configuration: battery parameters plus named current profiles.
/// The built-in sky and wsn430 profiles are always present; a config file can
/// override them or add new ones.
struct Config {
    BatteryParams params;
    std::map<std::string, CurrentProfile> profiles;

    const CurrentProfile& profile(const std::string& name) const;
};

/// Default config: stock parameters, built-in profiles only.
Config default_config();

/// Parse `key = value` lines with optional [profile.<name>] sections.
/// Recognized top-level keys: beta, delta_seconds, alpha_mAh, m_max,
/// idle_fraction. Profile keys: cpu_mA, lpm_mA, tx_mA, rx_mA. Blank lines and
/// lines starting with '#' or ';' are skipped. Unknown keys and malformed
/// lines raise ValidationError carrying `origin` and the line number.
Config parse_config(std::string_view text, const std::string& origin);

Config load_config_file(const std::string& path);

/// FNV-1a hash over the canonical serialized config; stamped into report
/// metadata so runs can be matched to the configuration that produced them.
std::string config_hash(const Config& cfg);

} // namespace battlife
