#include "kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace battlife::kernels {

namespace {

void update_diffusion_avx2(std::size_t n, double* y, const double* decay,
                           const double* acc, double c_last,
                           const double* w2) {
    std::size_t i = 0;
    __m256d vc = _mm256_set1_pd(c_last);
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vd = _mm256_loadu_pd(decay + i);
        __m256d va = _mm256_loadu_pd(acc + i);
        __m256d vw = _mm256_loadu_pd(w2 + i);
        __m256d inj = _mm256_mul_pd(_mm256_add_pd(va, vc), vw);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vy, vd, inj));
    }
    for (; i < n; ++i) {
        y[i] = y[i] * decay[i] + (acc[i] + c_last) * w2[i];
    }
}

void pow_m2_axpy_avx2(std::size_t n, double* acc, double t, double coeff) {
    if (t <= 0 || coeff == 0) return;

    double t2 = t * t;
    double t4 = t2 * t2;
    double t8 = t4 * t4;
    double t16 = t8 * t8;
    double t24 = t16 * t8;
    double t32 = t16 * t16;

    __m256d v = _mm256_set_pd(t16, t8 * t, t4, t);
    __m256d s = _mm256_mul_pd(_mm256_set1_pd(t24),
                              _mm256_set_pd(t24, t16, t8, 1.0));
    __m256d sstep = _mm256_set1_pd(t32);
    __m256d vcoeff = _mm256_set1_pd(coeff);
    __m256d tiny = _mm256_set1_pd(1e-300);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        if (_mm256_movemask_pd(_mm256_cmp_pd(v, tiny, _CMP_LT_OQ)) == 0xf) {
            return;
        }
        __m256d va = _mm256_loadu_pd(acc + i);
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(vcoeff, v, va));
        v = _mm256_mul_pd(v, s);
        s = _mm256_mul_pd(s, sstep);
    }
    if (i < n) {
        alignas(32) double lane[4];
        _mm256_store_pd(lane, v);
        for (std::size_t k = 0; i < n; ++i, ++k) {
            if (lane[k] < 1e-300) break;
            acc[i] += coeff * lane[k];
        }
    }
}

double sum_avx2(std::size_t n, const double* x) {
    __m256d vs = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vs = _mm256_add_pd(vs, _mm256_loadu_pd(x + i));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, vs);
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) s += x[i];
    return s;
}

void window_charge_batch_avx2(std::size_t n, const int32_t* cpu_ms,
                              const int32_t* lpm_ms, const int32_t* tx_ms,
                              const int32_t* rx_ms, const double* currents,
                              double* out) {
    __m256d c0 = _mm256_set1_pd(currents[0]);
    __m256d c1 = _mm256_set1_pd(currents[1]);
    __m256d c2 = _mm256_set1_pd(currents[2]);
    __m256d c3 = _mm256_set1_pd(currents[3]);
    __m256d kilo = _mm256_set1_pd(1000.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_cvtepi32_pd(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(cpu_ms + i)));
        __m256d b = _mm256_cvtepi32_pd(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(lpm_ms + i)));
        __m256d c = _mm256_cvtepi32_pd(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(tx_ms + i)));
        __m256d d = _mm256_cvtepi32_pd(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(rx_ms + i)));
        __m256d q = _mm256_mul_pd(a, c0);
        q = _mm256_fmadd_pd(b, c1, q);
        q = _mm256_fmadd_pd(c, c2, q);
        q = _mm256_fmadd_pd(d, c3, q);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(q, kilo));
    }
    for (; i < n; ++i) {
        out[i] = (cpu_ms[i] * currents[0] + lpm_ms[i] * currents[1] +
                  tx_ms[i] * currents[2] + rx_ms[i] * currents[3]) *
                 1000.0;
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2",
        update_diffusion_avx2,
        pow_m2_axpy_avx2,
        sum_avx2,
        window_charge_batch_avx2,
    };
    return ops;
}

} // namespace battlife::kernels

#endif
