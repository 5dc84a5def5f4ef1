#include "kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace battlife::kernels {

bool avx2_available() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops& resolve() {
    const char* pref = std::getenv("BATTLIFE_KERNELS");
    bool force_scalar = pref != nullptr && std::strcmp(pref, "scalar") == 0;
#if defined(__x86_64__) || defined(_M_X64)
    if (!force_scalar && avx2_available()) return avx2_ops();
#endif
    (void)force_scalar;
    return scalar_ops();
}

} // namespace

const Ops& ops() {
    static const Ops& chosen = resolve();
    return chosen;
}

} // namespace battlife::kernels
