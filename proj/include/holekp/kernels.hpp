#pragma once

#include <complex>

// Data-parallel inner loops used by the quadrature projector, the potential
// grid evaluation and the state-overlap contractions. Every kernel has a
// scalar reference implementation and an AVX2 variant; the active one is
// picked at load time from CPUID and can be overridden with
// HOLEKP_SIMD=scalar|avx2 (used by the equivalence tests).

namespace holekp::kern {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);

// Test hook; throws InvalidParameter if the ISA is unsupported on this CPU.
void force_isa(Isa isa);
void reset_isa();

// C[m,n] += sum_k A[m,k] * B[k,n]; all row-major contiguous.
void matmul_acc(const double* a, const double* b, double* c, int m, int k, int n);

// out[ij*nz + k] = base[ij] + fz[k] + cz[ij] * z[k]
void combine_axis(const double* base, const double* cz, const double* fz,
                  const double* z, double* out, int nij, int nz);

// sum_i |v[i]|^2
double abs2_sum(const std::complex<double>* v, int n);

// sum_i conj(a[i]) * b[i]
std::complex<double> cdotc(const std::complex<double>* a,
                           const std::complex<double>* b, int n);

namespace detail {
struct Impl {
    void (*matmul_acc)(const double*, const double*, double*, int, int, int);
    void (*combine_axis)(const double*, const double*, const double*,
                         const double*, double*, int, int);
    double (*abs2_sum)(const std::complex<double>*, int);
    std::complex<double> (*cdotc)(const std::complex<double>*,
                                  const std::complex<double>*, int);
};
extern const Impl scalar_impl;
extern const Impl avx2_impl;
} // namespace detail

} // namespace holekp::kern
