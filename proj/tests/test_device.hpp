#pragma once

// Small shared fixtures for device-level tests: a reduced basis keeps the
// dense solves in the tens of milliseconds.

#include "holekp/basis.hpp"
#include "holekp/constants.hpp"
#include "holekp/hamiltonian.hpp"
#include "holekp/potential.hpp"
#include "holekp/solver.hpp"

namespace testdev {

inline holekp::BasisSpec small_basis(std::array<int, 3> n_max = {4, 4, 3},
                                     double gamma1 = 4.285) {
    return holekp::build_basis(n_max, {55.0, 45.0, 170.0}, gamma1);
}

inline holekp::FieldPtr default_field(double vg = -0.8, double width = 10.0) {
    holekp::DeviceGeometry geom;
    geom.width_nm = width;
    return holekp::model_potential(geom, holekp::ModelPotentialParams{}, vg);
}

inline holekp::LuttingerParams si_params() { return holekp::LuttingerParams{}; }

// Synthetic harmonic confinement matching the basis mass m0/gamma1.
class HarmonicField final : public holekp::PotentialField {
public:
    HarmonicField(std::array<double, 3> homega_meV, double gamma1)
        : holekp::PotentialField(holekp::Provenance::model, 0.0),
          homega_(homega_meV), gamma1_(gamma1) {}

    double value(double x, double y, double z) const override {
        return term(0, x) + term(1, y) + term(2, z);
    }

private:
    double term(int axis, double r) const {
        const double w = homega_[axis];
        return w * w * r * r / (4.0 * gamma1_ * holekp::constants::hbar2_over_2m0);
    }
    std::array<double, 3> homega_;
    double gamma1_;
};

} // namespace testdev
