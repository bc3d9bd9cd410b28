#pragma once

#include <vector>

namespace holekp::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1].
Rule gauss_legendre(int n);

// Gauss-Hermite in "flattened" form: nodes t_k and weights w~_k with
//   integral g(t) exp(-t^2) dt = sum_k w~_k [g(t_k) exp(-t_k^2)],
// i.e. w~_k = w_k exp(t_k^2), suited to integrands expressed through the
// orthonormal oscillator functions psi_n (no under/overflow at high order).
Rule gauss_hermite_flattened(int n);

// table[n*nk + k] = psi_n(t[k]) for n = 0..nmax, where psi_n are the
// orthonormal 1D oscillator eigenfunctions in the dimensionless variable.
std::vector<double> hermite_functions(int nmax, const std::vector<double>& t);

} // namespace holekp::quad
