#include "battlife/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace battlife {

double f_over_beta2(double nu_min, const DerivedParams& d) {
    double sqrt_nu = d.sqrt_a + (nu_min - d.a) * d.inv_2sqrt_a;
    return nu_min / 2.0 - (d.sqrt_pi / d.beta) * sqrt_nu +
           d.pi_sq / (6.0 * d.beta * d.beta);
}

void step(ChargeState& s, const DutyWindow& w, const CurrentProfile& p,
          const DerivedParams& d) {
    validate_window(w, static_cast<int32_t>(std::lround(d.delta_min * 60000)));
    double charge_mamin = window_charge(w, p) / 6.0e7;
    s.cum_mamin += charge_mamin;

    double u = d.lambda * s.unavail_mamin;
    double nu_min = idle_time_ms(w) / 60000.0;
    double delta_k_min = d.delta_min - nu_min;
    if (delta_k_min > 0) {
        double avail = f_over_beta2(nu_min, d) - d.c0;
        if (avail < 0) avail = 0;
        double i_n = charge_mamin / delta_k_min;
        u += 2.0 * i_n * avail;
    }
    s.unavail_mamin = u;
    ++s.n;
}

double remaining_charge(const ChargeState& s, double alpha_mamin) {
    return std::max(0.0, alpha_mamin - s.sigma());
}

bool exhausted(const ChargeState& s, double alpha_mamin) {
    return s.sigma() >= alpha_mamin;
}

double remaining_metric(const ChargeState& s, double alpha_mamin) {
    return remaining_charge(s, alpha_mamin) / alpha_mamin * kMetricFullScale;
}

} // namespace battlife
