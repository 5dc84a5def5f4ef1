#pragma once

#include <cstdint>

#include "battlife/params.hpp"
#include "battlife/workload.hpp"

namespace battlife {

/// Integer estimator state as a mote would persist it: four 32-bit fields.
/// Charge is held in kilo-units of 1e-3 mA*min plus a sub-unit carry in
/// microamp-milliseconds, so repeated small windows lose nothing to rounding.
struct IntChargeState {
    int32_t cum_ku = 0;
    int32_t cum_rem_u = 0;
    int32_t unavail_ku = 0;
    int32_t n = 0;

    /// Apparent drawn charge in microamp-milliseconds.
    int64_t sigma_u() const {
        return (static_cast<int64_t>(cum_ku) + unavail_ku) * 60000 +
               cum_rem_u;
    }
};

/// Tangent-line square root on the 1e-3 min scale:
///   sqrt_a + (nu - a) / (2 sqrt(a)), all operands pre-scaled, quotient
/// truncated toward zero.
int32_t isqrt_scaled(int32_t nu_1e3min, const ScaledConstants& c);

/// f(nu)/beta^2 on the 1e-3 scale, single fused integer expression.
int32_t fnu_scaled_1e3(int32_t nu_1e3min, const ScaledConstants& c);

/// Advance by one window using only integer arithmetic. Intermediate products
/// are widened and checked; a result that cannot fit its 32-bit field raises
/// OverflowError. The integer path assumes the stock 2 s window.
void step_int(IntChargeState& s, const DutyWindow& w, const IntProfile& p,
              const ScaledConstants& c);

int64_t alpha_to_u(double alpha_mamin);

/// Remaining charge on the 0..25500000 reporting scale, rounded down and
/// clamped. The product (alpha - sigma) * 25500000 needs 128-bit headroom.
int32_t remaining_metric(const IntChargeState& s, int64_t alpha_u);

} // namespace battlife
