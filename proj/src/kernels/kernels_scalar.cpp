#include "kernels.hpp"

namespace battlife::kernels {

namespace {

void update_diffusion_scalar(std::size_t n, double* y, const double* decay,
                             const double* acc, double c_last,
                             const double* w2) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = y[i] * decay[i] + (acc[i] + c_last) * w2[i];
    }
}

void pow_m2_axpy_scalar(std::size_t n, double* acc, double t, double coeff) {
    if (t <= 0 || coeff == 0) return;
    double r = t;
    double t2 = t * t;
    double s = t2 * t;
    for (std::size_t i = 0; i < n; ++i) {
        if (r < 1e-300) break;
        acc[i] += coeff * r;
        r *= s;
        s *= t2;
    }
}

double sum_scalar(std::size_t n, const double* x) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

void window_charge_batch_scalar(std::size_t n, const int32_t* cpu_ms,
                                const int32_t* lpm_ms, const int32_t* tx_ms,
                                const int32_t* rx_ms, const double* currents,
                                double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (cpu_ms[i] * currents[0] + lpm_ms[i] * currents[1] +
                  tx_ms[i] * currents[2] + rx_ms[i] * currents[3]) *
                 1000.0;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        update_diffusion_scalar,
        pow_m2_axpy_scalar,
        sum_scalar,
        window_charge_batch_scalar,
    };
    return ops;
}

} // namespace battlife::kernels
