#include "doctest.h"

#include "holekp/constants.hpp"
#include "holekp/solver.hpp"
#include "test_device.hpp"

#include <cmath>
#include <random>

using namespace holekp;
using Eigen::VectorXcd;
using std::complex;

TEST_CASE("solver: dense and shift-invert routes agree on a device matrix") {
    auto spec = testdev::small_basis();   // spinor dim 600
    auto lut = testdev::si_params();
    auto field = testdev::default_field();
    auto h = assemble_total(spec, lut, *field,
                            MagneticField::from_angles(0.4, 30, 60));

    SolverOptions dense;
    dense.method = SolverOptions::Method::dense;
    auto sd = lowest_eigenpairs(h, 8, dense);

    SolverOptions iter;
    iter.method = SolverOptions::Method::iterative;
    auto si = lowest_eigenpairs(h, 8, iter);

    CHECK(sd.info.method == "dense-zheevr");
    CHECK(si.info.method == "shift-invert-lanczos");
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(sd.states[i].energy_meV - si.states[i].energy_meV) < 1e-10);
}

TEST_CASE("solver: argument validation") {
    auto spec = testdev::small_basis({1, 1, 1});
    auto lut = testdev::si_params();
    auto field = testdev::default_field();
    auto h = assemble_total(spec, lut, *field, MagneticField{});
    CHECK_THROWS_AS(lowest_eigenpairs(h, 1), InvalidParameter);
    CHECK_THROWS_AS(lowest_eigenpairs(h, h.dim() + 2), InvalidParameter);
}

TEST_CASE("time reversal: band mapping, involution, norm") {
    auto spec = testdev::small_basis({1, 1, 1});
    const int dim = spec.orbital_dim() * 6;

    // pure (3/2, 3/2) component maps to (3/2, -3/2) with sign -1
    VectorXcd v = VectorXcd::Zero(dim);
    v[0] = 1.0;
    VectorXcd tv = time_reverse(v, 6);
    CHECK(tv[3] == complex<double>(-1.0, 0.0));

    std::mt19937 rng(9);
    std::normal_distribution<double> d;
    for (long i = 0; i < dim; ++i) v[i] = complex<double>(d(rng), d(rng));
    v.normalize();
    const VectorXcd t2 = time_reverse(time_reverse(v, 6), 6);
    CHECK((t2 + v).norm() < 1e-14);            // Θ² = -1
    CHECK(time_reverse(v, 6).norm() == doctest::Approx(1.0).epsilon(1e-14));
    // Kramers orthogonality
    CHECK(std::abs(v.dot(time_reverse(v, 6))) < 1e-12);
}

TEST_CASE("kramers pairing at B = 0: degeneracy and Θ-locking") {
    auto spec = testdev::small_basis();
    auto lut = testdev::si_params();
    auto field = testdev::default_field();
    auto h = assemble_total(spec, lut, *field, MagneticField{});
    auto spectrum = kramers_pair(lowest_eigenpairs(h, 10), MagneticField{});

    for (size_t i = 0; i + 1 < spectrum.states.size(); i += 2) {
        CHECK(std::abs(spectrum.states[i + 1].energy_meV -
                       spectrum.states[i].energy_meV) < 1e-9);
        CHECK(spectrum.states[i].member == 'd');
        CHECK(spectrum.states[i + 1].member == 'u');
        CHECK(spectrum.states[i].doublet == static_cast<int>(i / 2) + 1);

        // Θ|⇓> = |⇑> as constructed
        const VectorXcd tu = time_reverse(spectrum.states[i].coeff, 6);
        const double ov = std::abs(spectrum.states[i + 1].coeff.dot(tu));
        CHECK(ov == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(spectrum.gap_meV > 1.0);
}

TEST_CASE("kramers pairing: heavy-hole Zeeman doublet is labeled by construction") {
    auto spec = testdev::small_basis();
    LuttingerParams lut = testdev::si_params();
    lut.couple_r = false;
    lut.couple_s = false;
    auto field = testdev::default_field();

    TermMask zeeman_only{true, false, false};
    auto h = assemble_total(spec, lut, *field, MagneticField::along_axis(0.5, 2),
                            zeeman_only);
    auto spectrum = kramers_pair(lowest_eigenpairs(h, 4),
                                 MagneticField::along_axis(0.5, 2));

    // κ < 0: the M = +3/2 member (band 0) sits lower, so it is ⇓
    const auto& dn = spectrum.states[0];
    const auto& up = spectrum.states[1];
    double p0_dn = 0.0, p3_up = 0.0;
    for (int n = 0; n < spec.orbital_dim(); ++n) {
        p0_dn += std::norm(dn.coeff[n * 6 + 0]);
        p3_up += std::norm(up.coeff[n * 6 + 3]);
    }
    CHECK(p0_dn > 0.999);
    CHECK(p3_up > 0.999);

    // splitting equals 6|κ| μ_B B in the pure-hh limit
    const double split = up.energy_meV - dn.energy_meV;
    const double expect = 6.0 * std::abs(lut.kappa) * constants::mu_B * 0.5;
    CHECK(split == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("kramers pairing: three quasi-degenerate states raise an error") {
    auto spec = testdev::small_basis({1, 1, 1});
    Spectrum fake;
    fake.band_count = 6;
    const int dim = spec.orbital_dim() * 6;
    for (int i = 0; i < 4; ++i) {
        SpinorState s;
        s.coeff = VectorXcd::Zero(dim);
        s.coeff[i] = 1.0;
        s.energy_meV = (i < 3) ? 1.0 + 1e-9 * i : 5.0;
        fake.states.push_back(std::move(s));
    }
    CHECK_THROWS_AS(kramers_pair(std::move(fake), MagneticField{}),
                    NumericalError);
}
