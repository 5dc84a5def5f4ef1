#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "battlife/params.hpp"

namespace battlife {

/// One accounting window of node activity. Host time is split between CPU and
/// LPM; the radio runs on top of whichever host state is active, so tx/rx
/// milliseconds overlap the cpu/lpm budget rather than extending it.
struct DutyWindow {
    int32_t cpu_ms = 0;
    int32_t lpm_ms = 0;
    int32_t tx_ms = 0;
    int32_t rx_ms = 0;
};

inline constexpr int32_t kWindowMs = 2000;

/// Charge drawn over one window, in microamp-milliseconds. Radio charge is
/// additive on top of the host-state charge.
double window_charge(const DutyWindow& w, const CurrentProfile& p);

/// Integer variant used by the on-mote arithmetic path. Exact in int64.
int64_t window_charge_u(const DutyWindow& w, const IntProfile& p);

/// Recoverable idle time nu in milliseconds: LPM time not occupied by the
/// radio, clamped at zero.
int32_t idle_time_ms(const DutyWindow& w);

void validate_window(const DutyWindow& w, int32_t window_ms = kWindowMs);

enum class RdcKind {
    contikimac,
    xmac,
    cxmac,
    sicslowmac,
    constant,
    none,
};

/// Traffic position of the node: senders originate packets, forwarders also
/// relay them (one extra reception and processing per packet), sinks only
/// receive.
enum class RdcRole {
    sender,
    forwarder,
    sink,
};

RdcKind parse_rdc_kind(std::string_view name);
std::string_view rdc_kind_name(RdcKind kind);
RdcRole parse_rdc_role(std::string_view name);
std::string_view rdc_role_name(RdcRole role);

/// Streaming generator of duty windows for a radio duty-cycling discipline at
/// a fixed application packet rate. Packet arrivals are spread
/// deterministically so that every prefix of n windows carries
/// floor(n * window / interval) packets.
class RdcGenerator {
  public:
    RdcGenerator(RdcKind kind, double packets_per_min,
                 RdcRole role = RdcRole::sender);

    DutyWindow next();
    void skip(int64_t n);
    int64_t index() const { return index_; }
    RdcKind kind() const { return kind_; }

  private:
    RdcKind kind_;
    RdcRole role_;
    int64_t interval_us_ = 0;
    int64_t index_ = 0;
};

/// One-off load disturbances spliced onto the start of a phase.
enum class ScenarioEvent {
    none,
    boot,        ///< dense CPU and radio for the first minute
    join_burst,  ///< elevated tx/rx for the first minute
    parent_loss, ///< heavy rx polling for the first three minutes
};

struct ScenarioPhase {
    double duration_min = 0;
    RdcKind kind = RdcKind::contikimac;
    double packets_per_min = 0;
    RdcRole role = RdcRole::sender;
    ScenarioEvent event = ScenarioEvent::none;
};

struct Scenario {
    std::vector<ScenarioPhase> phases;
    uint64_t seed = 0;
};

std::vector<DutyWindow> build_scenario(const Scenario& s);

/// Named presets over the phase machinery:
///   steady       duty cycling at the requested packet rate for the whole run
///   boot         bursty start-up minute, then steady
///   burst_idle   bursty minute followed by pure idle
///   parent_loss  steady, three minutes of heavy listening, then steady at
///                half rate
///   join_burst   steady with a minute of elevated tx/rx starting at t=5 min
std::vector<std::string> scenario_names();

std::vector<DutyWindow> build_scenario(const std::string& name, RdcKind kind,
                                       double packets_per_min,
                                       double duration_min, uint64_t seed = 0,
                                       RdcRole role = RdcRole::sender);

/// Parse a node activity trace in either accepted CSV layout:
///   start_ms,end_ms,state        state in {CPU, LPM, TX, RX}
///   window,cpu_ms,lpm_ms,tx_ms,rx_ms
/// Interval rows are binned into fixed windows of window_ms; a trailing
/// partial window is dropped. Windows whose cpu+lpm time disagrees with the
/// window length by more than 1% raise ValidationError naming the offending
/// line or window.
std::vector<DutyWindow> parse_trace(std::string_view text,
                                    const std::string& origin,
                                    int32_t window_ms = kWindowMs);

std::vector<DutyWindow> load_trace_file(const std::string& path,
                                        int32_t window_ms = kWindowMs);

} // namespace battlife
