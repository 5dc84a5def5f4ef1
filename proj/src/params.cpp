#include "battlife/params.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "battlife/errors.hpp"

namespace battlife {

double c0_series(double beta, double delta_min, int m_max) {
    double b2 = beta * beta;
    double s = 0;
    for (int m = m_max; m >= 1; --m) {
        double m2 = static_cast<double>(m) * m;
        s += std::exp(-b2 * m2 * delta_min) / (b2 * m2);
    }
    return s;
}

DerivedParams precompute(const BatteryParams& p, double idle_fraction) {
    if (!(p.beta > 0)) throw ValidationError("beta must be positive");
    if (!(p.delta_min > 0)) throw ValidationError("delta must be positive");
    if (!(p.alpha_mamin > 0)) throw ValidationError("alpha must be positive");
    if (p.m_max < 1) throw ValidationError("m_max must be at least 1");
    if (!(idle_fraction > 0) || idle_fraction > 1) {
        throw ValidationError("idle_fraction must be in (0, 1]");
    }

    DerivedParams d;
    d.beta = p.beta;
    d.delta_min = p.delta_min;
    d.m_max = p.m_max;
    d.pi_sq = M_PI * M_PI;
    d.sqrt_pi = std::sqrt(M_PI);
    d.c0 = c0_series(p.beta, p.delta_min, p.m_max);
    d.lambda = std::exp(-p.beta * p.beta * p.delta_min);
    d.a = idle_fraction * p.delta_min;
    d.sqrt_a = std::sqrt(d.a);
    d.inv_2sqrt_a = 1.0 / (2.0 * d.sqrt_a);
    return d;
}

DerivedParams precompute(const BatteryParams& p) {
    return precompute(p, p.idle_fraction);
}

int64_t to_scaled(double value, int64_t scale) {
    double x = value * static_cast<double>(scale);
    double snapped = std::nearbyint(x);
    if (std::abs(x - snapped) <= 1e-6 * std::max(1.0, std::abs(x))) {
        x = snapped;
    }
    if (!(x > static_cast<double>(std::numeric_limits<int64_t>::min()) &&
          x < static_cast<double>(std::numeric_limits<int64_t>::max()))) {
        throw OverflowError("scaled constant out of range");
    }
    return static_cast<int64_t>(std::trunc(x));
}

ScaledConstants to_scaled(const DerivedParams& d) {
    ScaledConstants c;
    c.pi_sq = to_scaled(d.pi_sq, 1000);
    c.sqrt_pi = to_scaled(d.sqrt_pi, 1000);
    c.beta = to_scaled(d.beta, 10);
    c.c0 = to_scaled(d.c0, 1000);
    c.lambda = to_scaled(d.lambda, 1000);
    c.a = to_scaled(d.a, 1000);
    c.sqrt_a = to_scaled(d.sqrt_a, 1000);
    c.inv_2sqrt_a = to_scaled(d.inv_2sqrt_a, 1000);
    return c;
}

IntProfile to_int_profile(const CurrentProfile& p) {
    auto conv = [](double ma, const char* what) {
        double ua = ma * 1000.0;
        if (!(ua >= 0) || ua > 2e9) {
            throw ValidationError(std::string("current out of range: ") + what);
        }
        return static_cast<int32_t>(std::llround(ua));
    };
    IntProfile q;
    q.cpu_ua = conv(p.cpu_ma, "cpu");
    q.lpm_ua = conv(p.lpm_ma, "lpm");
    q.tx_ua = conv(p.tx_ma, "tx");
    q.rx_ua = conv(p.rx_ma, "rx");
    return q;
}

CurrentProfile sky_profile() {
    return CurrentProfile{"sky", 1.8, 0.0545, 17.4, 18.8};
}

CurrentProfile wsn430_profile() {
    return CurrentProfile{"wsn430", 2.0, 0.02, 16.1, 15.2};
}

} // namespace battlife
