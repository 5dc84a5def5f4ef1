#pragma once

#include <cstdint>
#include <string>

namespace battlife {

/// Battery and discretization parameters. Times are minutes, charge mA*min.
struct BatteryParams {
    double beta = 1.0;           ///< diffusion rate, min^(-1/2)
    double delta_min = 2.0 / 60; ///< estimation window length (2 s default)
    double alpha_mamin = 52800;  ///< battery capacity (880 mAh * 60)
    int m_max = 10;              ///< series truncation used by the estimators
    double idle_fraction = 0.9;  ///< tangent point a = idle_fraction * delta
};

/// Real-valued constants derived from BatteryParams once at startup.
struct DerivedParams {
    double pi_sq = 0;       ///< pi^2
    double sqrt_pi = 0;     ///< sqrt(pi)
    double beta = 0;
    double c0 = 0;          ///< sum_{m=1..m_max} e^(-beta^2 m^2 delta) / (beta^2 m^2)
    double lambda = 0;      ///< e^(-beta^2 delta), retention bound per window
    double a = 0;           ///< tangent point, idle_fraction * delta
    double sqrt_a = 0;
    double inv_2sqrt_a = 0; ///< 1 / (2 sqrt a)
    double delta_min = 0;
    int m_max = 0;
};

/// Integer twins of DerivedParams at the mote's published scales:
/// beta is x10, everything else x1000. Values are truncated toward zero.
struct ScaledConstants {
    std::int64_t pi_sq = 0;
    std::int64_t sqrt_pi = 0;
    std::int64_t beta = 0;
    std::int64_t c0 = 0;
    std::int64_t lambda = 0;
    std::int64_t a = 0;
    std::int64_t sqrt_a = 0;
    std::int64_t inv_2sqrt_a = 0;
};

/// Per-state current draw of a mote, mA.
struct CurrentProfile {
    std::string name;
    double cpu_ma = 0;
    double lpm_ma = 0;
    double tx_ma = 0;
    double rx_ma = 0;
};

/// Same profile in integer micro-amps (mA x1000, rounded half away from zero).
struct IntProfile {
    std::int32_t cpu_ua = 0;
    std::int32_t lpm_ua = 0;
    std::int32_t tx_ua = 0;
    std::int32_t rx_ua = 0;
};

/// Validate params and evaluate the derived constants. idle_fraction places
/// the tangent point a = idle_fraction * delta. Throws ValidationError for
/// delta <= 0, beta <= 0, m_max < 1, idle_fraction outside (0, 1],
/// alpha <= 0.
DerivedParams precompute(const BatteryParams& p, double idle_fraction);

/// Same, taking idle_fraction from the params struct.
DerivedParams precompute(const BatteryParams& p);

/// Scale one real constant to its integer twin: truncation toward zero after
/// scaling, with a snap for values within 1e-6 relative of an integer (so a
/// constant that is exact in decimal, like a = 0.03, survives float noise).
std::int64_t to_scaled(double value, std::int64_t scale);

/// All eight integer twins of the derived constants.
ScaledConstants to_scaled(const DerivedParams& d);

IntProfile to_int_profile(const CurrentProfile& p);

/// Built-in profiles.
CurrentProfile sky_profile();
CurrentProfile wsn430_profile();

/// c0 evaluated at an explicit truncation depth (convergence studies).
double c0_series(double beta, double delta_min, int m_max);

} // namespace battlife
