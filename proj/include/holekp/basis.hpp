#pragma once

#include "holekp/errors.hpp"

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

namespace holekp {

// Truncated 3D harmonic-oscillator product basis with mass m0/gamma1.
// Orbital states are enumerated lexicographically in (n_x, n_y, n_z):
// index = (n_x*(Nmax_y+1) + n_y)*(Nmax_z+1) + n_z, so n_z runs fastest.
// This ordering is fixed; coefficient dumps rely on it.
struct BasisSpec {
    std::array<int, 3> n_max{10, 10, 8};
    std::array<double, 3> homega_meV{};   // ħω per axis
    double gamma1 = 4.285;
    std::array<double, 3> length_nm{};    // ℓ_α = sqrt(ħ/(m ω_α)), derived

    int orbital_dim() const {
        return (n_max[0] + 1) * (n_max[1] + 1) * (n_max[2] + 1);
    }
    int index(int nx, int ny, int nz) const {
        return (nx * (n_max[1] + 1) + ny) * (n_max[2] + 1) + nz;
    }
    std::array<int, 3> quanta(int idx) const {
        const int nz1 = n_max[2] + 1, ny1 = n_max[1] + 1;
        return {idx / (ny1 * nz1), (idx / nz1) % ny1, idx % nz1};
    }
};

BasisSpec build_basis(const std::array<int, 3>& n_max,
                      const std::array<double, 3>& homega_meV, double gamma1);

// One-body operator labels. Two-axis kinds take (axis_a, axis_b); the mixed
// position-momentum product is the symmetrized {x_a, k_b}/2.
enum class OpKind { X, K, XX, KK, XKsym, Parity };

struct OpLabel {
    OpKind kind;
    int axis_a = 0;
    int axis_b = 0;
};

std::string to_string(const OpLabel& label);

struct OperatorMatrix {
    int dim = 0;
    Eigen::MatrixXcd mat;
    OpLabel label{};
};

OperatorMatrix operator_matrix(const BasisSpec& spec, const OpLabel& label);

// Per-axis 1D building blocks (dimension n_max[axis]+1); used by the
// Hamiltonian assembly, which forms the 3D operators itself.
namespace ops1d {
Eigen::MatrixXcd position(const BasisSpec& spec, int axis);
Eigen::MatrixXcd momentum(const BasisSpec& spec, int axis);
Eigen::MatrixXcd position_sq(const BasisSpec& spec, int axis);
Eigen::MatrixXcd momentum_sq(const BasisSpec& spec, int axis);
Eigen::MatrixXcd xk_sym(const BasisSpec& spec, int axis);
Eigen::MatrixXcd parity(const BasisSpec& spec, int axis);
Eigen::MatrixXcd identity(const BasisSpec& spec, int axis);
} // namespace ops1d

// kron(X, Y, Z) consistent with the basis enumeration (x slowest).
Eigen::MatrixXcd kron3(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y,
                       const Eigen::MatrixXcd& z);

struct OmegaOptResult {
    std::array<double, 3> homega_meV{};
    double energy = 0.0;
    int evaluations = 0;
    bool warning = false;   // set when the budget ran out before convergence
    std::vector<double> best_trace;  // best energy after each simplex step
};

// Derivative-free (Nelder-Mead) minimization of the ground energy over the
// three basis frequencies. `budget` caps objective evaluations; budget == 0
// returns `init` untouched with the warning flag set.
OmegaOptResult optimize_frequencies(
    const std::function<double(const std::array<double, 3>&)>& ground_energy,
    const std::array<double, 3>& init, int budget, double tol_rel = 1e-5);

} // namespace holekp
