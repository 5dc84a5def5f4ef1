#pragma once

#include <cstddef>
#include <cstdint>

namespace battlife::kernels {

/// Inner-loop kernels over per-mode arrays. All implementations of one entry
/// point compute the same mathematical result; associativity of the
/// reductions may differ between variants.
struct Ops {
    const char* name;

    /// y[i] = y[i] * decay[i] + (acc[i] + c_last) * w2[i]
    void (*update_diffusion)(std::size_t n, double* y, const double* decay,
                             const double* acc, double c_last,
                             const double* w2);

    /// acc[i] += coeff * t^((i+1)^2) for t in (0, 1]. Stops early once the
    /// power underflows to a negligible magnitude.
    void (*pow_m2_axpy)(std::size_t n, double* acc, double t, double coeff);

    double (*sum)(std::size_t n, const double* x);

    /// out[i] = (cpu[i] * c[0] + lpm[i] * c[1] + tx[i] * c[2] + rx[i] * c[3]) * 1000
    /// with currents c in mA and times in ms, charge out in microamp-ms.
    void (*window_charge_batch)(std::size_t n, const int32_t* cpu_ms,
                                const int32_t* lpm_ms, const int32_t* tx_ms,
                                const int32_t* rx_ms, const double* currents,
                                double* out);
};

const Ops& scalar_ops();

/// Best variant for this machine, resolved once. The BATTLIFE_KERNELS
/// environment variable ("scalar" or "avx2") overrides the automatic choice;
/// asking for avx2 on a machine without it falls back to scalar.
const Ops& ops();

bool avx2_available();

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif

} // namespace battlife::kernels
