#include "battlife/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "battlife/errors.hpp"

namespace battlife {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& value, const std::string& origin,
                    int line_no) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != value.size() || !std::isfinite(v)) {
        throw ValidationError(origin + ":" + std::to_string(line_no) +
                              ": bad number '" + value + "'");
    }
    return v;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

const CurrentProfile& Config::profile(const std::string& name) const {
    auto it = profiles.find(name);
    if (it == profiles.end()) {
        std::string known;
        for (const auto& [k, _] : profiles) {
            if (!known.empty()) known += ", ";
            known += k;
        }
        throw ValidationError("unknown profile '" + name + "' (have: " +
                              known + ")");
    }
    return it->second;
}

Config default_config() {
    Config cfg;
    cfg.profiles["sky"] = sky_profile();
    cfg.profiles["wsn430"] = wsn430_profile();
    return cfg;
}

Config parse_config(std::string_view text, const std::string& origin) {
    Config cfg = default_config();
    std::set<std::string> fresh;

    std::string section;
    CurrentProfile* prof = nullptr;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        std::string where = origin + ":" + std::to_string(line_no);

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError(where + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.rfind("profile.", 0) != 0 ||
                section.size() <= 8) {
                throw ValidationError(where + ": unknown section [" + section +
                                      "] (expected [profile.<name>])");
            }
            std::string name = section.substr(8);
            auto [it, inserted] =
                cfg.profiles.try_emplace(name, CurrentProfile{name, 0, 0, 0, 0});
            if (inserted) fresh.insert(name);
            prof = &it->second;
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(where + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ValidationError(where + ": expected key = value");
        }

        if (prof == nullptr) {
            double v = parse_number(value, origin, line_no);
            if (key == "beta") {
                cfg.params.beta = v;
            } else if (key == "delta_seconds") {
                cfg.params.delta_min = v / 60.0;
            } else if (key == "alpha_mAh") {
                cfg.params.alpha_mamin = v * 60.0;
            } else if (key == "m_max") {
                if (v != std::floor(v)) {
                    throw ValidationError(where + ": m_max must be an integer");
                }
                cfg.params.m_max = static_cast<int>(v);
            } else if (key == "idle_fraction") {
                cfg.params.idle_fraction = v;
            } else {
                throw ValidationError(where + ": unknown key '" + key + "'");
            }
        } else {
            double v = parse_number(value, origin, line_no);
            if (key == "cpu_mA") {
                prof->cpu_ma = v;
            } else if (key == "lpm_mA") {
                prof->lpm_ma = v;
            } else if (key == "tx_mA") {
                prof->tx_ma = v;
            } else if (key == "rx_mA") {
                prof->rx_ma = v;
            } else {
                throw ValidationError(where + ": unknown profile key '" + key +
                                      "'");
            }
            if (!(v >= 0)) {
                throw ValidationError(where + ": currents must be >= 0");
            }
            fresh.erase(prof->name);
        }
    }

    for (const auto& name : fresh) {
        throw ValidationError(origin + ": profile '" + name +
                              "' declares no currents");
    }
    precompute(cfg.params);
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string config_hash(const Config& cfg) {
    std::string canon;
    canon += "beta=" + fmt(cfg.params.beta) + "\n";
    canon += "delta_min=" + fmt(cfg.params.delta_min) + "\n";
    canon += "alpha_mamin=" + fmt(cfg.params.alpha_mamin) + "\n";
    canon += "m_max=" + std::to_string(cfg.params.m_max) + "\n";
    canon += "idle_fraction=" + fmt(cfg.params.idle_fraction) + "\n";
    for (const auto& [name, p] : cfg.profiles) {
        canon += "[" + name + "] " + fmt(p.cpu_ma) + " " + fmt(p.lpm_ma) +
                 " " + fmt(p.tx_ma) + " " + fmt(p.rx_ma) + "\n";
    }

    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace battlife
