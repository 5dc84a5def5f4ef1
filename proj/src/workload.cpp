#include "battlife/workload.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "battlife/errors.hpp"

namespace battlife {

double window_charge(const DutyWindow& w, const CurrentProfile& p) {
    return (w.cpu_ms * p.cpu_ma + w.lpm_ms * p.lpm_ma + w.tx_ms * p.tx_ma +
            w.rx_ms * p.rx_ma) *
           1000.0;
}

int64_t window_charge_u(const DutyWindow& w, const IntProfile& p) {
    return static_cast<int64_t>(w.cpu_ms) * p.cpu_ua +
           static_cast<int64_t>(w.lpm_ms) * p.lpm_ua +
           static_cast<int64_t>(w.tx_ms) * p.tx_ua +
           static_cast<int64_t>(w.rx_ms) * p.rx_ua;
}

int32_t idle_time_ms(const DutyWindow& w) {
    int32_t nu = w.lpm_ms - (w.tx_ms + w.rx_ms);
    return nu > 0 ? nu : 0;
}

void validate_window(const DutyWindow& w, int32_t window_ms) {
    if (w.cpu_ms < 0 || w.lpm_ms < 0 || w.tx_ms < 0 || w.rx_ms < 0) {
        throw ValidationError("window has negative time");
    }
    int32_t host = w.cpu_ms + w.lpm_ms;
    if (std::abs(host - window_ms) > window_ms / 100) {
        throw ValidationError("window host time " + std::to_string(host) +
                              " ms disagrees with window length " +
                              std::to_string(window_ms) + " ms");
    }
    if (w.tx_ms + w.rx_ms > window_ms) {
        throw ValidationError("window radio time exceeds window length");
    }
}

RdcKind parse_rdc_kind(std::string_view name) {
    if (name == "contikimac") return RdcKind::contikimac;
    if (name == "xmac") return RdcKind::xmac;
    if (name == "cxmac") return RdcKind::cxmac;
    if (name == "sicslowmac") return RdcKind::sicslowmac;
    if (name == "constant") return RdcKind::constant;
    if (name == "none") return RdcKind::none;
    throw ValidationError(
        "unknown rdc '" + std::string(name) +
        "' (contikimac, xmac, cxmac, sicslowmac, constant, none)");
}

std::string_view rdc_kind_name(RdcKind kind) {
    switch (kind) {
        case RdcKind::contikimac: return "contikimac";
        case RdcKind::xmac: return "xmac";
        case RdcKind::cxmac: return "cxmac";
        case RdcKind::sicslowmac: return "sicslowmac";
        case RdcKind::constant: return "constant";
        case RdcKind::none: return "none";
    }
    return "?";
}

RdcRole parse_rdc_role(std::string_view name) {
    if (name == "sender") return RdcRole::sender;
    if (name == "forwarder") return RdcRole::forwarder;
    if (name == "sink") return RdcRole::sink;
    throw ValidationError("unknown role '" + std::string(name) +
                          "' (sender, forwarder, sink)");
}

std::string_view rdc_role_name(RdcRole role) {
    switch (role) {
        case RdcRole::sender: return "sender";
        case RdcRole::forwarder: return "forwarder";
        case RdcRole::sink: return "sink";
    }
    return "?";
}

namespace {

struct RdcCal {
    int32_t cpu_base_ms;
    int32_t radio_listen_ms;
    int32_t pkt_tx_ms;
    int32_t pkt_cpu_ms;
    int32_t pkt_rx_ms;
};

const RdcCal& rdc_cal(RdcKind kind) {
    static constexpr RdcCal contikimac{50, 16, 8, 5, 2};
    static constexpr RdcCal xmac{50, 160, 40, 5, 4};
    static constexpr RdcCal cxmac{50, 184, 46, 5, 4};
    static constexpr RdcCal sicslowmac{20, -1, 6, 6, 0};
    static constexpr RdcCal constant{kWindowMs, 0, 0, 0, 0};
    static constexpr RdcCal none{0, 0, 0, 0, 0};
    switch (kind) {
        case RdcKind::contikimac: return contikimac;
        case RdcKind::xmac: return xmac;
        case RdcKind::cxmac: return cxmac;
        case RdcKind::sicslowmac: return sicslowmac;
        case RdcKind::constant: return constant;
        case RdcKind::none: return none;
    }
    return none;
}

} // namespace

RdcGenerator::RdcGenerator(RdcKind kind, double packets_per_min, RdcRole role)
    : kind_(kind), role_(role) {
    if (packets_per_min < 0 || !std::isfinite(packets_per_min)) {
        throw ValidationError("packet rate must be non-negative");
    }
    if (packets_per_min > 0) {
        interval_us_ = std::llround(6.0e7 / packets_per_min);
        if (interval_us_ < static_cast<int64_t>(kWindowMs) * 1000 / 64) {
            throw ValidationError("packet rate too high for window length");
        }
    }
}

DutyWindow RdcGenerator::next() {
    int64_t w = index_++;
    const RdcCal& cal = rdc_cal(kind_);

    int64_t npkt = 0;
    if (interval_us_ > 0) {
        int64_t win_us = static_cast<int64_t>(kWindowMs) * 1000;
        npkt = (w + 1) * win_us / interval_us_ - w * win_us / interval_us_;
    }
    auto n = static_cast<int32_t>(npkt);

    int32_t cpu_pkt = cal.pkt_cpu_ms * n;
    int32_t tx_pkt = cal.pkt_tx_ms * n;
    int32_t rx_pkt = cal.pkt_rx_ms * n;
    if (role_ == RdcRole::forwarder) {
        cpu_pkt += cal.pkt_cpu_ms * n;
        rx_pkt += cal.pkt_tx_ms * n;
    } else if (role_ == RdcRole::sink) {
        tx_pkt = 0;
        rx_pkt += cal.pkt_tx_ms * n;
    }

    DutyWindow out;
    out.cpu_ms = cal.cpu_base_ms + cpu_pkt;
    out.tx_ms = tx_pkt;
    if (cal.radio_listen_ms < 0) {
        out.rx_ms = kWindowMs - out.tx_ms;
    } else {
        out.rx_ms = cal.radio_listen_ms + rx_pkt;
    }
    out.cpu_ms = std::min(out.cpu_ms, kWindowMs);
    out.lpm_ms = kWindowMs - out.cpu_ms;
    out.tx_ms = std::min(out.tx_ms, kWindowMs);
    out.rx_ms = std::min(out.rx_ms, kWindowMs - out.tx_ms);
    return out;
}

void RdcGenerator::skip(int64_t n) { index_ += n; }

std::vector<std::string> scenario_names() {
    return {"steady", "boot", "burst_idle", "parent_loss", "join_burst"};
}

namespace {

uint64_t rng_below(std::mt19937_64& g, uint64_t bound) {
    return bound == 0 ? 0 : g() % bound;
}

constexpr DutyWindow kBootWindow{600, 1400, 100, 500};
constexpr int64_t kBootWindows = 30;

int64_t windows_for(double duration_min) {
    return static_cast<int64_t>(
        std::floor(duration_min * 60000.0 / kWindowMs + 1e-9));
}

DutyWindow event_window(ScenarioEvent event, const DutyWindow& base,
                        std::mt19937_64& rng) {
    DutyWindow d = base;
    switch (event) {
        case ScenarioEvent::none:
            break;
        case ScenarioEvent::boot:
            d = kBootWindow;
            break;
        case ScenarioEvent::parent_loss:
            d.cpu_ms = 100 + static_cast<int32_t>(rng_below(rng, 11));
            d.lpm_ms = kWindowMs - d.cpu_ms;
            d.tx_ms = 10;
            d.rx_ms = 300 + static_cast<int32_t>(rng_below(rng, 21));
            break;
        case ScenarioEvent::join_burst:
            d.cpu_ms = std::min(
                kWindowMs,
                d.cpu_ms + 50 + static_cast<int32_t>(rng_below(rng, 11)));
            d.lpm_ms = kWindowMs - d.cpu_ms;
            d.tx_ms = std::min(kWindowMs, d.tx_ms + 40);
            d.rx_ms = std::min(kWindowMs - d.tx_ms, d.rx_ms + 60);
            break;
    }
    return d;
}

int64_t event_windows(ScenarioEvent event) {
    switch (event) {
        case ScenarioEvent::none: return 0;
        case ScenarioEvent::boot: return kBootWindows;
        case ScenarioEvent::join_burst: return kBootWindows;
        case ScenarioEvent::parent_loss: return 3 * kBootWindows;
    }
    return 0;
}

} // namespace

std::vector<DutyWindow> build_scenario(const Scenario& s) {
    if (s.phases.empty()) {
        throw ValidationError("scenario has no phases");
    }
    std::vector<DutyWindow> out;
    std::mt19937_64 rng(s.seed ^ 0x9e3779b97f4a7c15ull);

    int64_t offset = 0;
    for (const auto& ph : s.phases) {
        if (!(ph.duration_min > 0)) {
            throw ValidationError("phase duration must be positive");
        }
        int64_t n = windows_for(ph.duration_min);
        RdcGenerator gen(ph.kind, ph.packets_per_min, ph.role);
        gen.skip(offset);
        int64_t burst = std::min(n, event_windows(ph.event));
        for (int64_t w = 0; w < n; ++w) {
            DutyWindow base = gen.next();
            out.push_back(w < burst ? event_window(ph.event, base, rng)
                                    : base);
        }
        offset += n;
    }
    return out;
}

std::vector<DutyWindow> build_scenario(const std::string& name, RdcKind kind,
                                       double packets_per_min,
                                       double duration_min, uint64_t seed,
                                       RdcRole role) {
    if (!(duration_min > 0)) {
        throw ValidationError("scenario duration must be positive");
    }
    if (windows_for(duration_min) < 1) {
        throw ValidationError("scenario shorter than one window");
    }
    double boot_min = std::min(duration_min, 1.0);
    double rest_min = duration_min - boot_min;

    Scenario s;
    s.seed = seed;
    if (name == "steady") {
        s.phases = {{duration_min, kind, packets_per_min, role,
                     ScenarioEvent::none}};
    } else if (name == "boot") {
        s.phases = {{duration_min, kind, packets_per_min, role,
                     ScenarioEvent::boot}};
    } else if (name == "burst_idle") {
        s.phases = {{boot_min, kind, packets_per_min, role,
                     ScenarioEvent::boot}};
        if (rest_min > 0) {
            s.phases.push_back({rest_min, RdcKind::none, 0.0, role,
                                ScenarioEvent::none});
        }
    } else if (name == "parent_loss") {
        double steady_min = std::min(duration_min, 5.0);
        double loss_min = std::min(duration_min - steady_min, 3.0);
        double after_min = duration_min - steady_min - loss_min;
        s.phases = {{steady_min, kind, packets_per_min, role,
                     ScenarioEvent::none}};
        if (loss_min > 0) {
            s.phases.push_back({loss_min, kind, packets_per_min,
                                role, ScenarioEvent::parent_loss});
        }
        if (after_min > 0) {
            s.phases.push_back({after_min, kind, packets_per_min / 2.0,
                                role, ScenarioEvent::none});
        }
    } else if (name == "join_burst") {
        double steady_min = std::min(duration_min, 5.0);
        double burst_min = std::min(duration_min - steady_min, 1.0);
        double after_min = duration_min - steady_min - burst_min;
        s.phases = {{steady_min, kind, packets_per_min, role,
                     ScenarioEvent::none}};
        if (burst_min > 0) {
            s.phases.push_back({burst_min, kind, packets_per_min,
                                role, ScenarioEvent::join_burst});
        }
        if (after_min > 0) {
            s.phases.push_back({after_min, kind, packets_per_min,
                                role, ScenarioEvent::none});
        }
    } else {
        std::string known;
        for (const auto& sn : scenario_names()) {
            if (!known.empty()) known += ", ";
            known += sn;
        }
        throw ValidationError("unknown scenario '" + name + "' (have: " +
                              known + ")");
    }
    return build_scenario(s);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r' && ch != ' ' && ch != '\t') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])) && s[i] != '.') {
            return false;
        }
    }
    return true;
}

int64_t parse_int_field(const std::string& s, const std::string& where) {
    if (!looks_numeric(s) || s.find('.') != std::string::npos) {
        throw ValidationError(where + ": expected integer, got '" + s + "'");
    }
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end == s.c_str() || *end != '\0') {
        throw ValidationError(where + ": expected integer, got '" + s + "'");
    }
    return v;
}

} // namespace

std::vector<DutyWindow> parse_trace(std::string_view text,
                                    const std::string& origin,
                                    int32_t window_ms) {
    if (window_ms <= 0) throw ValidationError("window length must be positive");

    struct IntervalRow {
        int64_t start_ms;
        int64_t end_ms;
        int state;
        int line_no;
    };
    std::vector<IntervalRow> intervals;
    std::vector<DutyWindow> windows;
    bool window_format = false;
    bool format_known = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    int64_t next_index = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string where = origin + ":" + std::to_string(line_no);
        auto fields = split_csv(raw);
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (!format_known) {
            if (fields.size() == 3) {
                window_format = false;
            } else if (fields.size() == 5) {
                window_format = true;
            } else {
                throw ValidationError(where + ": expected 3 or 5 columns, got " +
                                      std::to_string(fields.size()));
            }
            format_known = true;
            if (!looks_numeric(fields[0])) continue;
        }
        if (fields.size() != (window_format ? 5u : 3u)) {
            throw ValidationError(where + ": expected " +
                                  std::to_string(window_format ? 5 : 3) +
                                  " columns, got " +
                                  std::to_string(fields.size()));
        }

        if (window_format) {
            int64_t idx = parse_int_field(fields[0], where);
            if (idx != next_index) {
                throw ValidationError(where + ": window index " +
                                      std::to_string(idx) + ", expected " +
                                      std::to_string(next_index));
            }
            ++next_index;
            DutyWindow w;
            auto fit32 = [&](int64_t v) {
                if (v < 0 || v > window_ms) {
                    throw ValidationError(where + ": time " +
                                          std::to_string(v) +
                                          " ms outside window");
                }
                return static_cast<int32_t>(v);
            };
            w.cpu_ms = fit32(parse_int_field(fields[1], where));
            w.lpm_ms = fit32(parse_int_field(fields[2], where));
            w.tx_ms = fit32(parse_int_field(fields[3], where));
            w.rx_ms = fit32(parse_int_field(fields[4], where));
            try {
                validate_window(w, window_ms);
            } catch (const ValidationError& e) {
                throw ValidationError(where + ": " + e.what());
            }
            windows.push_back(w);
        } else {
            int64_t s = parse_int_field(fields[0], where);
            int64_t e = parse_int_field(fields[1], where);
            if (s < 0 || e <= s) {
                throw ValidationError(where + ": bad interval [" +
                                      std::to_string(s) + ", " +
                                      std::to_string(e) + ")");
            }
            int state;
            if (fields[2] == "CPU") {
                state = 0;
            } else if (fields[2] == "LPM") {
                state = 1;
            } else if (fields[2] == "TX") {
                state = 2;
            } else if (fields[2] == "RX") {
                state = 3;
            } else {
                throw ValidationError(where + ": unknown state '" + fields[2] +
                                      "' (CPU, LPM, TX, RX)");
            }
            intervals.push_back({s, e, state, line_no});
        }
    }

    if (window_format) return windows;
    if (intervals.empty()) return {};

    int64_t end_ms = 0;
    for (const auto& iv : intervals) end_ms = std::max(end_ms, iv.end_ms);
    int64_t n_windows = end_ms / window_ms;
    windows.assign(static_cast<std::size_t>(n_windows), DutyWindow{});
    if (n_windows == 0) return {};

    int64_t span_ms = n_windows * window_ms;
    for (const auto& iv : intervals) {
        int64_t s = iv.start_ms;
        int64_t e = std::min(iv.end_ms, span_ms);
        for (int64_t w = s / window_ms; w * window_ms < e; ++w) {
            int64_t lo = std::max(s, w * window_ms);
            int64_t hi = std::min(e, (w + 1) * window_ms);
            auto add = static_cast<int32_t>(hi - lo);
            auto& dw = windows[static_cast<std::size_t>(w)];
            switch (iv.state) {
                case 0: dw.cpu_ms += add; break;
                case 1: dw.lpm_ms += add; break;
                case 2: dw.tx_ms += add; break;
                case 3: dw.rx_ms += add; break;
            }
        }
    }

    for (std::size_t w = 0; w < windows.size(); ++w) {
        try {
            validate_window(windows[w], window_ms);
        } catch (const ValidationError& e) {
            throw ValidationError(origin + ": window " + std::to_string(w) +
                                  ": " + e.what());
        }
    }
    return windows;
}

std::vector<DutyWindow> load_trace_file(const std::string& path,
                                        int32_t window_ms) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open trace file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace(ss.str(), path, window_ms);
}

} // namespace battlife
