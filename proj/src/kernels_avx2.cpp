// AVX2+FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; it must not be entered on CPUs without AVX2 (the
// dispatcher guarantees that).

#include "holekp/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace holekp::kern {
namespace {

void matmul_acc_avx2(const double* a, const double* b, double* c,
                     int m, int k, int n) {
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        double* crow = c + static_cast<long>(i) * n;
        const double* arow = a + static_cast<long>(i) * k;
        for (int p = 0; p < k; ++p) {
            const __m256d av = _mm256_set1_pd(arow[p]);
            const double* brow = b + static_cast<long>(p) * n;
            int j = 0;
            for (; j + 8 <= n; j += 8) {
                __m256d c0 = _mm256_loadu_pd(crow + j);
                __m256d c1 = _mm256_loadu_pd(crow + j + 4);
                c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), c0);
                c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j + 4), c1);
                _mm256_storeu_pd(crow + j, c0);
                _mm256_storeu_pd(crow + j + 4, c1);
            }
            for (; j < n4; j += 4) {
                __m256d c0 = _mm256_loadu_pd(crow + j);
                c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), c0);
                _mm256_storeu_pd(crow + j, c0);
            }
            for (; j < n; ++j) crow[j] += arow[p] * brow[j];
        }
    }
}

void combine_axis_avx2(const double* base, const double* cz, const double* fz,
                       const double* z, double* out, int nij, int nz) {
    const int nz4 = nz & ~3;
    for (int ij = 0; ij < nij; ++ij) {
        const __m256d b0 = _mm256_set1_pd(base[ij]);
        const __m256d c1 = _mm256_set1_pd(cz[ij]);
        double* row = out + static_cast<long>(ij) * nz;
        int kk = 0;
        for (; kk < nz4; kk += 4) {
            __m256d v = _mm256_add_pd(b0, _mm256_loadu_pd(fz + kk));
            v = _mm256_fmadd_pd(c1, _mm256_loadu_pd(z + kk), v);
            _mm256_storeu_pd(row + kk, v);
        }
        for (; kk < nz; ++kk) row[kk] = base[ij] + fz[kk] + cz[ij] * z[kk];
    }
}

double abs2_sum_avx2(const std::complex<double>* v, int n) {
    const double* p = reinterpret_cast<const double*>(v);
    const int d = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= d; i += 4) {
        const __m256d x = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, acc);
    double s = tmp[0] + tmp[1] + tmp[2] + tmp[3];
    for (; i < d; ++i) s += p[i] * p[i];
    return s;
}

std::complex<double> cdotc_avx2(const std::complex<double>* a,
                                const std::complex<double>* b, int n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    // lanes hold [re0, im0, re1, im1]
    __m256d re_acc = _mm256_setzero_pd();
    __m256d im_acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        re_acc = _mm256_fmadd_pd(va, vb, re_acc);              // ar*br, ai*bi
        const __m256d swapped = _mm256_permute_pd(va, 0x5);    // ai, ar
        im_acc = _mm256_fmadd_pd(swapped, vb, im_acc);         // ai*br, ar*bi
    }
    alignas(32) double tr[4], ti[4];
    _mm256_store_pd(tr, re_acc);
    _mm256_store_pd(ti, im_acc);
    double re = tr[0] + tr[1] + tr[2] + tr[3];
    double im = (ti[1] - ti[0]) + (ti[3] - ti[2]);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

} // namespace

namespace detail {
const Impl avx2_impl = {matmul_acc_avx2, combine_axis_avx2,
                        abs2_sum_avx2, cdotc_avx2};
} // namespace detail

} // namespace holekp::kern

#else // non-x86: the dispatcher never selects avx2_impl

namespace holekp::kern::detail {
const Impl avx2_impl = {nullptr, nullptr, nullptr, nullptr};
} // namespace holekp::kern::detail

#endif
