#include "battlife/estimator_int.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "battlife/errors.hpp"

namespace battlife {

namespace {

int32_t narrow32(int64_t v, const char* what) {
    if (v < std::numeric_limits<int32_t>::min() ||
        v > std::numeric_limits<int32_t>::max()) {
        throw OverflowError(std::string(what) + " no longer fits 32 bits");
    }
    return static_cast<int32_t>(v);
}

} // namespace

int32_t isqrt_scaled(int32_t nu_1e3min, const ScaledConstants& c) {
    int64_t slope = (nu_1e3min - c.a) * c.inv_2sqrt_a / 1000;
    return narrow32(c.sqrt_a + slope, "scaled sqrt");
}

int32_t fnu_scaled_1e3(int32_t nu_1e3min, const ScaledConstants& c) {
    int64_t b = c.beta;
    int64_t r = isqrt_scaled(nu_1e3min, c);
    int64_t num = 600 * b * b * nu_1e3min + 20000 * c.pi_sq -
                  12 * b * c.sqrt_pi * r;
    int64_t den = b * b * 1200;
    if (den == 0) throw NumericError("beta too small for scaled arithmetic");
    return narrow32(num / den, "scaled f(nu)");
}

void step_int(IntChargeState& s, const DutyWindow& w, const IntProfile& p,
              const ScaledConstants& c) {
    validate_window(w, kWindowMs);
    int64_t charge_u = window_charge_u(w, p);
    if (charge_u < 0) throw OverflowError("negative window charge");

    int64_t rem = s.cum_rem_u + charge_u;
    int64_t cum_ku = s.cum_ku + rem / 60000;
    rem %= 60000;

    int64_t u = c.lambda * s.unavail_ku / 1000;

    int32_t nu_ms = idle_time_ms(w);
    int32_t delta_k_ms = w.cpu_ms + w.lpm_ms - nu_ms;
    if (delta_k_ms > 0) {
        int64_t i_ua = charge_u / delta_k_ms;
        int64_t avail_1e3 = fnu_scaled_1e3(nu_ms / 60, c) - c.c0;
        if (avail_1e3 < 0) avail_1e3 = 0;
        u += i_ua * avail_1e3 / 500;
    }

    s.cum_ku = narrow32(cum_ku, "consumed charge");
    s.cum_rem_u = static_cast<int32_t>(rem);
    s.unavail_ku = narrow32(u, "unavailable charge");
    s.n = narrow32(static_cast<int64_t>(s.n) + 1, "window count");
}

int64_t alpha_to_u(double alpha_mamin) {
    if (!(alpha_mamin > 0)) throw ValidationError("alpha must be positive");
    double u = alpha_mamin * 6.0e7;
    if (u >= 9.0e18) throw OverflowError("alpha too large");
    return std::llround(u);
}

int32_t remaining_metric(const IntChargeState& s, int64_t alpha_u) {
    if (alpha_u <= 0) throw ValidationError("alpha must be positive");
    int64_t rem = alpha_u - s.sigma_u();
    if (rem <= 0) return 0;
    auto scaled = static_cast<__int128>(rem) * 25500000;
    auto metric = static_cast<int64_t>(scaled / alpha_u);
    if (metric > 25500000) metric = 25500000;
    return static_cast<int32_t>(metric);
}

} // namespace battlife
