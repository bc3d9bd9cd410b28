#include "holekp/kernels.hpp"

namespace holekp::kern {
namespace {

void matmul_acc_scalar(const double* a, const double* b, double* c,
                       int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        double* crow = c + static_cast<long>(i) * n;
        const double* arow = a + static_cast<long>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double av = arow[p];
            const double* brow = b + static_cast<long>(p) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void combine_axis_scalar(const double* base, const double* cz, const double* fz,
                         const double* z, double* out, int nij, int nz) {
    for (int ij = 0; ij < nij; ++ij) {
        const double b0 = base[ij];
        const double c1 = cz[ij];
        double* row = out + static_cast<long>(ij) * nz;
        for (int kk = 0; kk < nz; ++kk) row[kk] = b0 + fz[kk] + c1 * z[kk];
    }
}

double abs2_sum_scalar(const std::complex<double>* v, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(v[i]);
    return s;
}

std::complex<double> cdotc_scalar(const std::complex<double>* a,
                                  const std::complex<double>* b, int n) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

} // namespace

namespace detail {
const Impl scalar_impl = {matmul_acc_scalar, combine_axis_scalar,
                          abs2_sum_scalar, cdotc_scalar};
} // namespace detail

} // namespace holekp::kern
