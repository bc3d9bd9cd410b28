#pragma once

#include "holekp/hamiltonian.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace holekp {

// Hole eigenstate over the (orbital x band) spinor basis; coefficient index
// is orbital*band_count + band.
struct SpinorState {
    Eigen::VectorXcd coeff;
    double energy_meV = 0.0;
    int doublet = 0;     // m >= 1 after pairing
    char member = '?';   // 'u' = up (⇑), 'd' = down (⇓)
    int band_count = 6;
};

struct SolveInfo {
    std::string method;
    double max_residual = 0.0;   // ‖Hv−Ev‖ / ‖H‖_inf, worst state
    int iterations = 0;
};

struct Spectrum {
    std::vector<SpinorState> states;   // energies non-decreasing
    double gap_meV = 0.0;              // first to second doublet (after pairing)
    SolveInfo info;
    int band_count = 6;
};

struct SolverOptions {
    enum class Method { automatic, dense, iterative };
    Method method = Method::automatic;
    int dense_threshold = 4000;
    double residual_tol = 5e-13;   // relative to ‖H‖_inf
    int max_blocks = 220;          // Lanczos blocks of size 2
    unsigned seed = 7;
};

Spectrum lowest_eigenpairs(const HamiltonianMatrix& h, int k,
                           const SolverOptions& opt = {});

Eigen::VectorXcd time_reverse(const Eigen::VectorXcd& coeff, int band_count);
SpinorState time_reverse(const SpinorState& s);

struct KramersOptions {
    double pairing_tol_meV = 1e-6;
    const Spectrum* reference = nullptr;  // weak z-field labels for B > 0
};

// Groups states into doublets, assigns ⇑/⇓ and fixes phases. At B = 0 the ⇓
// member is rebuilt as -Θ⇑ so the time-reversal structure holds exactly.
Spectrum kramers_pair(Spectrum spectrum, const MagneticField& field,
                      const KramersOptions& opt = {});

} // namespace holekp
