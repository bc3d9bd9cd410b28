#include "holekp/quadrature.hpp"
#include "holekp/errors.hpp"

#include <cmath>
#include <lapacke.h>

namespace holekp::quad {

namespace {

// Eigen-decomposition of the symmetric tridiagonal Jacobi matrix
// (Golub-Welsch). diag is zero for both weight functions used here.
void jacobi_nodes(std::vector<double>& offdiag, int n, bool with_vectors,
                  std::vector<double>& nodes, std::vector<double>& v0) {
    nodes.assign(n, 0.0);
    std::vector<double> z(with_vectors ? static_cast<size_t>(n) * n : 1, 0.0);
    int info = LAPACKE_dstev(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', n,
                             nodes.data(), offdiag.data(), z.data(),
                             with_vectors ? n : 1);
    if (info != 0)
        throw NumericalError("dstev failed in quadrature setup, info=" +
                             std::to_string(info));
    if (with_vectors) {
        v0.resize(n);
        for (int k = 0; k < n; ++k) v0[k] = z[static_cast<size_t>(k) * n];
    }
}

} // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw InvalidParameter("gauss_legendre: order must be >= 1");
    std::vector<double> off(n - 1);
    for (int j = 1; j < n; ++j)
        off[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
    Rule r;
    std::vector<double> v0;
    jacobi_nodes(off, n, true, r.nodes, v0);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) r.weights[k] = 2.0 * v0[k] * v0[k];
    return r;
}

Rule gauss_hermite_flattened(int n) {
    if (n < 1) throw InvalidParameter("gauss_hermite: order must be >= 1");
    std::vector<double> off(n - 1);
    for (int j = 1; j < n; ++j) off[j - 1] = std::sqrt(0.5 * j);
    Rule r;
    std::vector<double> v0;
    jacobi_nodes(off, n, false, r.nodes, v0);
    // Christoffel weights through the orthonormal oscillator functions:
    // w_k exp(t_k^2) = 1 / sum_{j<n} psi_j(t_k)^2.
    std::vector<double> psi = hermite_functions(n - 1, r.nodes);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p = psi[static_cast<size_t>(j) * n + k];
            s += p * p;
        }
        r.weights[k] = 1.0 / s;
    }
    return r;
}

std::vector<double> hermite_functions(int nmax, const std::vector<double>& t) {
    const int nk = static_cast<int>(t.size());
    std::vector<double> table(static_cast<size_t>(nmax + 1) * nk);
    const double norm0 = std::pow(M_PI, -0.25);
    for (int k = 0; k < nk; ++k) {
        const double x = t[k];
        double pm1 = norm0 * std::exp(-0.5 * x * x);
        table[k] = pm1;
        if (nmax == 0) continue;
        double p = std::sqrt(2.0) * x * pm1;
        table[static_cast<size_t>(nk) + k] = p;
        for (int j = 2; j <= nmax; ++j) {
            const double pj = std::sqrt(2.0 / j) * x * p -
                              std::sqrt((j - 1.0) / j) * pm1;
            pm1 = p;
            p = pj;
            table[static_cast<size_t>(j) * nk + k] = pj;
        }
    }
    return table;
}

} // namespace holekp::quad
