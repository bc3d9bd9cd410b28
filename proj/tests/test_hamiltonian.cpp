#include "doctest.h"

#include "holekp/constants.hpp"
#include "holekp/hamiltonian.hpp"
#include "holekp/solver.hpp"
#include "test_device.hpp"

#include <cmath>

using namespace holekp;
using Eigen::MatrixXcd;
using std::complex;

namespace {

// Band-space time-reversal matrix on the full spinor space.
MatrixXcd theta_matrix(int orbital_dim, int bc) {
    MatrixXcd t = MatrixXcd::Zero(orbital_dim * bc, orbital_dim * bc);
    for (int n = 0; n < orbital_dim; ++n) {
        const int o = n * bc;
        t(o + 3, o + 0) = -1.0;
        t(o + 2, o + 1) = 1.0;
        t(o + 1, o + 2) = -1.0;
        t(o + 0, o + 3) = 1.0;
        if (bc == 6) {
            t(o + 5, o + 4) = -1.0;
            t(o + 4, o + 5) = 1.0;
        }
    }
    return t;
}

double hermiticity_defect(const MatrixXcd& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff() /
           std::max(h.cwiseAbs().maxCoeff(), 1e-300);
}

class ConstantField final : public PotentialField {
public:
    explicit ConstantField(double c)
        : PotentialField(Provenance::model, 0.0), c_(c) {}
    double value(double, double, double) const override { return c_; }

private:
    double c_;
};

class StepField final : public PotentialField {
public:
    StepField(double height, double edge, double smooth)
        : PotentialField(Provenance::model, 0.0),
          h_(height), edge_(edge), s_(smooth) {}
    double value(double, double, double z) const override {
        return h_ * logistic_step((std::abs(z) - edge_) / s_);
    }

private:
    double h_, edge_, s_;
};

} // namespace

TEST_CASE("hamiltonian: decoupled-band harmonic limit reproduces the HO spectrum") {
    const std::array<double, 3> w{40.0, 55.0, 70.0};
    auto spec = build_basis({5, 5, 5}, w, 4.285);

    LuttingerParams lut;
    lut.gamma2 = 0.0;
    lut.gamma3 = 0.0;
    lut.delta_so_meV = 0.0;

    testdev::HarmonicField uh(w, lut.gamma1);
    auto h = assemble_total(spec, lut, uh, MagneticField{}, TermMask{});
    CHECK(hermiticity_defect(h.mat) < 1e-12);

    auto spectrum = lowest_eigenpairs(h, 12);
    const double e0 = 0.5 * (w[0] + w[1] + w[2]);
    for (int i = 0; i < 6; ++i)
        CHECK(spectrum.states[i].energy_meV == doctest::Approx(e0).epsilon(1e-8));
    for (int i = 6; i < 12; ++i)
        CHECK(spectrum.states[i].energy_meV ==
              doctest::Approx(e0 + w[0]).epsilon(1e-8));
}

TEST_CASE("project_potential: constant field gives c*I exactly") {
    auto spec = testdev::small_basis();
    PotentialProjector proj(spec);
    ConstantField c(3.7);
    const Eigen::MatrixXd m = proj.project(c);
    const int dim = spec.orbital_dim();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double expect = (i == j) ? 3.7 : 0.0;
            CHECK(std::abs(m(i, j) - expect) < 1e-12 * 3.7);
        }
}

TEST_CASE("project_potential: harmonic diagonal element <0|U|0> = ħω/4") {
    const std::array<double, 3> w{48.0, 48.0, 48.0};
    auto spec = build_basis({3, 3, 3}, w, 4.285);
    // U = (1/2) m ω_x² x² only
    class XSq final : public PotentialField {
    public:
        XSq(double homega, double gamma1)
            : PotentialField(Provenance::model, 0.0), w_(homega), g1_(gamma1) {}
        double value(double x, double, double) const override {
            return w_ * w_ * x * x / (4.0 * g1_ * constants::hbar2_over_2m0);
        }
        double w_, g1_;
    } u(w[0], spec.gamma1);

    PotentialProjector proj(spec);
    const Eigen::MatrixXd m = proj.project(u);
    CHECK(m(0, 0) == doctest::Approx(w[0] / 4.0).epsilon(1e-12));
}

TEST_CASE("project_potential: smoothed step against a high-order quadrature oracle") {
    auto spec = testdev::small_basis();
    StepField step(50.0, 1.8, 0.5);
    PotentialProjector coarse(spec);       // default order
    PotentialProjector fine(spec, 200);    // reference rule
    const Eigen::MatrixXd a = coarse.project(step);
    const Eigen::MatrixXd b = fine.project(step);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("zeeman: matrix structure and limits") {
    auto spec = testdev::small_basis({2, 2, 2});
    LuttingerParams lut;

    auto hz0 = assemble_zeeman(spec, lut, MagneticField{});
    CHECK(hz0.mat.cwiseAbs().maxCoeff() == 0.0);

    auto hz = assemble_zeeman(spec, lut, MagneticField::along_axis(1.0, 2));
    const double k3 = 3.0 * lut.kappa * constants::mu_B;
    CHECK(hz.mat(0, 0).real() == doctest::Approx(k3).epsilon(1e-12));
    CHECK(hz.mat(3, 3).real() == doctest::Approx(-k3).epsilon(1e-12));
    // heavy-hole splitting 6|κ|μ_B corresponds to g_z = 2.57
    CHECK(6.0 * std::abs(lut.kappa) == doctest::Approx(2.57).epsilon(2e-3));

    auto hx = assemble_zeeman(spec, lut, MagneticField::along_axis(1.0, 0));
    CHECK(std::abs(hx.mat(0, 0)) == 0.0);          // hh diagonal vanishes
    CHECK(std::abs(hx.mat(0, 3)) == 0.0);          // no hh-hh coupling
    CHECK(hx.mat(1, 0) ==
          complex<double>(std::sqrt(3.0) * lut.kappa * constants::mu_B, 0.0));

    // traceless for any orientation
    auto ha = assemble_zeeman(spec, lut, MagneticField::from_angles(0.7, 63, 117));
    CHECK(std::abs(ha.mat.trace()) < 1e-12);
    CHECK(hermiticity_defect(ha.mat) < 1e-12);
}

TEST_CASE("field orbital terms: parity in B and homogeneity") {
    auto spec = testdev::small_basis({3, 3, 2});
    LuttingerParams lut;

    auto zero = assemble_field_orbital(spec, lut, MagneticField{});
    CHECK(zero.paramagnetic.mat.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.diamagnetic.mat.cwiseAbs().maxCoeff() == 0.0);

    const auto f1 = MagneticField::from_angles(0.5, 37, 211);
    const auto f2 = MagneticField::from_angles(1.0, 37, 211);
    auto p1 = assemble_field_orbital(spec, lut, f1);
    auto p2 = assemble_field_orbital(spec, lut, f2);

    // diamagnetic scales as B²
    CHECK((p2.diamagnetic.mat - 4.0 * p1.diamagnetic.mat).cwiseAbs().maxCoeff() <
          1e-12 * p2.diamagnetic.mat.cwiseAbs().maxCoeff());
    // paramagnetic scales as B
    CHECK((p2.paramagnetic.mat - 2.0 * p1.paramagnetic.mat).cwiseAbs().maxCoeff() <
          1e-12 * p2.paramagnetic.mat.cwiseAbs().maxCoeff());

    CHECK(hermiticity_defect(p2.paramagnetic.mat) < 1e-12);
    CHECK(hermiticity_defect(p2.diamagnetic.mat) < 1e-12);
}

TEST_CASE("paramagnetic term: analytic ladder element in the decoupled limit") {
    // γ2=γ3=0, B along z: the paramagnetic part reduces to
    // (ħ²γ1/2m0)(e/ħ) B (x k_y − y k_x) in every band.
    std::array<double, 3> w{};
    const double lx = 2.0, ly = 1.5, lz = 1.0;
    const double c2 = 2.0 * constants::hbar2_over_2m0;
    w[0] = c2 * 4.285 / (lx * lx);
    w[1] = c2 * 4.285 / (ly * ly);
    w[2] = c2 * 4.285 / (lz * lz);
    auto spec = build_basis({2, 2, 2}, w, 4.285);

    LuttingerParams lut;
    lut.gamma2 = 0.0;
    lut.gamma3 = 0.0;

    auto parts = assemble_field_orbital(spec, lut, MagneticField::along_axis(1.0, 2));
    const int row = spec.index(0, 0, 0) * 6;      // band (3/2,3/2)
    const int col = spec.index(1, 1, 0) * 6;
    const complex<double> got = parts.paramagnetic.mat(row, col);

    const double coeff = constants::hbar2_over_2m0 * lut.gamma1 *
                         constants::e_over_hbar;
    const complex<double> expect =
        coeff * complex<double>(0.0, -0.5) * (lx / ly - ly / lx);
    CHECK(std::abs(got - expect) < 1e-12 * std::abs(expect));
}

TEST_CASE("assembled hamiltonian: time-reversal structure at B = 0") {
    auto spec = testdev::small_basis({3, 3, 2});
    auto lut = testdev::si_params();
    auto field = testdev::default_field();

    auto h = assemble_total(spec, lut, *field, MagneticField{});
    const MatrixXcd t = theta_matrix(spec.orbital_dim(), 6);
    const MatrixXcd transformed = t * h.mat.conjugate() * t.adjoint();
    const double scale = h.mat.cwiseAbs().maxCoeff();
    CHECK((transformed - h.mat).cwiseAbs().maxCoeff() < 1e-12 * scale);

    // Zeeman term is odd under time reversal
    auto hz = assemble_zeeman(spec, lut, MagneticField::from_angles(1.0, 40, 70));
    const MatrixXcd tz = t * hz.mat.conjugate() * t.adjoint();
    CHECK((tz + hz.mat).cwiseAbs().maxCoeff() <
          1e-12 * hz.mat.cwiseAbs().maxCoeff());
}

TEST_CASE("assemble_total: masks and additivity") {
    auto spec = testdev::small_basis({3, 2, 2});
    auto lut = testdev::si_params();
    auto field = testdev::default_field();
    const auto bf = MagneticField::from_angles(1.0, 45, 0);

    TermMask all_off{false, false, false};
    auto h_off = assemble_total(spec, lut, *field, bf, all_off);
    auto h_b0 = assemble_total(spec, lut, *field, MagneticField{});
    CHECK((h_off.mat - h_b0.mat).cwiseAbs().maxCoeff() == 0.0);

    auto h_full = assemble_total(spec, lut, *field, bf);
    auto hz = assemble_zeeman(spec, lut, bf);
    auto hp = assemble_field_orbital(spec, lut, bf);
    const MatrixXcd sum =
        h_b0.mat + hz.mat + hp.paramagnetic.mat + hp.diamagnetic.mat;
    CHECK((h_full.mat - sum).cwiseAbs().maxCoeff() <
          1e-12 * h_full.mat.cwiseAbs().maxCoeff());
    CHECK(hermiticity_defect(h_full.mat) < 1e-12);
}

TEST_CASE("split-off decoupling: large Δ_SO approaches the 4-band result") {
    auto spec = testdev::small_basis();
    auto field = testdev::default_field();

    LuttingerParams lut6 = testdev::si_params();
    lut6.delta_so_meV = 1e6;
    auto h6 = assemble_total(spec, lut6, *field, MagneticField{});
    auto s6 = lowest_eigenpairs(h6, 4);

    LuttingerParams lut4 = testdev::si_params();
    lut4.band_count = 4;
    auto h4 = assemble_total(spec, lut4, *field, MagneticField{});
    auto s4 = lowest_eigenpairs(h4, 4);

    for (int i = 0; i < 4; ++i) {
        const auto& st = s6.states[i];
        double so_occ = 0.0;
        for (int n = 0; n < spec.orbital_dim(); ++n)
            so_occ += std::norm(st.coeff[n * 6 + 4]) + std::norm(st.coeff[n * 6 + 5]);
        CHECK(so_occ < 1e-4);
        CHECK(std::abs(st.energy_meV - s4.states[i].energy_meV) <
              1e-3 * std::abs(s4.states[i].energy_meV));
    }
}
