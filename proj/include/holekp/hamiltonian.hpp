#pragma once

#include "holekp/basis.hpp"
#include "holekp/potential.hpp"

#include <Eigen/Dense>
#include <memory>

namespace holekp {

// Valence-band parameters. couple_r / couple_s switch off the R and S
// band-coupling paths (test mode for the pure-heavy-hole limit).
struct LuttingerParams {
    double gamma1 = 4.285;
    double gamma2 = 0.339;
    double gamma3 = 1.446;
    double kappa = -0.4283;
    double delta_so_meV = 44.0;
    int band_count = 6;
    bool couple_r = true;
    bool couple_s = true;

    void validate() const;
};

struct MagneticField {
    double b_tesla = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;

    Eigen::Vector3d unit() const;          // (sinθcosφ, sinθsinφ, cosθ)
    Eigen::Vector3d vec() const { return b_tesla * unit(); }

    static MagneticField from_angles(double b, double theta_deg, double phi_deg);
    static MagneticField along_axis(double b, int axis);  // exact unit vectors

    // set only by along_axis
    bool has_exact_axis() const { return axis_ >= 0; }

private:
    int axis_ = -1;
};

struct TermMask {
    bool zeeman = true;
    bool paramagnetic = true;
    bool diamagnetic = true;
};

struct HamiltonianMatrix {
    Eigen::MatrixXcd mat;
    int band_count = 6;
    int orbital_dim = 0;
    double v_gate = 0.0;
    MagneticField field{};

    int dim() const { return band_count * orbital_dim; }
};

// Gauss-Hermite projector for one BasisSpec; caches nodes and the
// weight-carrying pair tables. points_per_axis == 0 selects
// max(2*n_max+16, 48) on each axis.
class PotentialProjector {
public:
    explicit PotentialProjector(const BasisSpec& spec, int points_per_axis = 0);
    ~PotentialProjector();
    PotentialProjector(PotentialProjector&&) noexcept;

    // <n|U|n'> over the orbital basis; real symmetric.
    Eigen::MatrixXd project(const PotentialField& field) const;

    const BasisSpec& spec() const;
    int points(int axis) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

HamiltonianMatrix assemble_kp(const BasisSpec& spec, const LuttingerParams& lut);

HamiltonianMatrix assemble_zeeman(const BasisSpec& spec, const LuttingerParams& lut,
                                  const MagneticField& field);

struct FieldOrbitalParts {
    HamiltonianMatrix paramagnetic;  // odd in B
    HamiltonianMatrix diamagnetic;   // even in B
};

// Orbital magnetic terms from k -> k + (e/ħ)A, A = -(r × B)/2, symmetric
// gauge centered on the basis origin; every bilinear is ordering-symmetrized.
FieldOrbitalParts assemble_field_orbital(const BasisSpec& spec,
                                         const LuttingerParams& lut,
                                         const MagneticField& field);

HamiltonianMatrix project_potential(const BasisSpec& spec,
                                    const LuttingerParams& lut,
                                    const PotentialField& field,
                                    const PotentialProjector* projector = nullptr);

HamiltonianMatrix assemble_total(const BasisSpec& spec, const LuttingerParams& lut,
                                 const PotentialField& field,
                                 const MagneticField& bfield,
                                 const TermMask& mask = {},
                                 const PotentialProjector* projector = nullptr);

// ∂H_B/∂B_χ at B -> 0 (Zeeman + paramagnetic; the diamagnetic part is
// second order and drops out). Result is in meV/T.
Eigen::MatrixXcd field_derivative_matrix(const BasisSpec& spec,
                                         const LuttingerParams& lut, int axis);

} // namespace holekp
