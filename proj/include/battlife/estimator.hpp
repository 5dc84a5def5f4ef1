#pragma once

#include <cstdint>

#include "battlife/params.hpp"
#include "battlife/workload.hpp"

namespace battlife {

/// Floating-point reference implementation of the recursive charge estimator.
/// Tracks consumed charge and the unavailable (still diffusing) charge bound
/// separately; their sum is the apparent drawn charge sigma.
struct ChargeState {
    double cum_mamin = 0;
    double unavail_mamin = 0;
    int64_t n = 0;

    double sigma() const { return cum_mamin + unavail_mamin; }
    double time_min(double delta_min) const {
        return static_cast<double>(n) * delta_min;
    }
};

/// f(nu)/beta^2 with the square root replaced by its tangent at nu = a:
///   nu/2 - (sqrt(pi)/beta) * (sqrt(a) + (nu - a) / (2 sqrt(a))) + pi^2 / (6 beta^2)
/// Exact at the tangency point, an underestimate elsewhere.
double f_over_beta2(double nu_min, const DerivedParams& d);

/// Advance the state by one window. The window's idle tail nu recovers
/// charge; the active remainder delta_k carries the window's whole charge as
/// one equivalent rectangle. A window with no active time only decays the
/// unavailable term. Rejects windows with negative times or a CPU+LPM total
/// more than 1% off the window length.
void step(ChargeState& s, const DutyWindow& w, const CurrentProfile& p,
          const DerivedParams& d);

/// Charge still deliverable before sigma reaches alpha, clamped at zero.
double remaining_charge(const ChargeState& s, double alpha_mamin);

bool exhausted(const ChargeState& s, double alpha_mamin);

/// Remaining charge mapped onto the integer reporting scale
/// (255 * 10^5 = full battery), kept as a double here.
double remaining_metric(const ChargeState& s, double alpha_mamin);

inline constexpr double kMetricFullScale = 25500000.0;

} // namespace battlife
