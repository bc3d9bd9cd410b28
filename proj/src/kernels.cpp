#include "holekp/kernels.hpp"
#include "holekp/errors.hpp"

#include <cstdlib>
#include <cstring>

namespace holekp::kern {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect_isa() {
    if (const char* env = std::getenv("HOLEKP_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_has_avx2())
                throw InvalidParameter("HOLEKP_SIMD=avx2 but CPU lacks AVX2/FMA");
            return Isa::avx2;
        }
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

Isa g_isa = detect_isa();

const detail::Impl& impl() {
    return g_isa == Isa::avx2 ? detail::avx2_impl : detail::scalar_impl;
}

} // namespace

Isa active_isa() { return g_isa; }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && !cpu_has_avx2())
        throw InvalidParameter("cannot force avx2 kernels: CPU lacks AVX2/FMA");
    g_isa = isa;
}

void reset_isa() { g_isa = detect_isa(); }

void matmul_acc(const double* a, const double* b, double* c, int m, int k, int n) {
    impl().matmul_acc(a, b, c, m, k, n);
}

void combine_axis(const double* base, const double* cz, const double* fz,
                  const double* z, double* out, int nij, int nz) {
    impl().combine_axis(base, cz, fz, z, out, nij, nz);
}

double abs2_sum(const std::complex<double>* v, int n) {
    return impl().abs2_sum(v, n);
}

std::complex<double> cdotc(const std::complex<double>* a,
                           const std::complex<double>* b, int n) {
    return impl().cdotc(a, b, n);
}

} // namespace holekp::kern
