#include "doctest.h"

#include "holekp/basis.hpp"
#include "holekp/constants.hpp"

#include <cmath>

using namespace holekp;
using Eigen::MatrixXcd;

TEST_CASE("basis: dimensions and enumeration") {
    auto spec = build_basis({0, 0, 0}, {10, 10, 10}, 4.285);
    CHECK(spec.orbital_dim() == 1);

    spec = build_basis({9, 9, 7}, {50, 50, 150}, 4.285);
    CHECK(spec.orbital_dim() == 800);
    CHECK(6 * spec.orbital_dim() == 4800);

    // lexicographic in (n_x, n_y, n_z), z fastest
    CHECK(spec.index(0, 0, 0) == 0);
    CHECK(spec.index(0, 0, 1) == 1);
    CHECK(spec.index(0, 1, 0) == 8);
    CHECK(spec.index(1, 0, 0) == 80);
    const auto q = spec.quanta(spec.index(3, 7, 5));
    CHECK(q[0] == 3);
    CHECK(q[1] == 7);
    CHECK(q[2] == 5);
}

TEST_CASE("basis: oscillator length round trip") {
    // ℓ = sqrt(ħ/(m ω)) with m = m0/γ1, so ħω = 2 (ħ²/2m0) γ1 / ℓ²
    const double gamma1 = 4.285;
    const double l_target = 2.0;
    const double homega =
        2.0 * constants::hbar2_over_2m0 * gamma1 / (l_target * l_target);
    auto spec = build_basis({4, 4, 4}, {homega, homega, homega}, gamma1);
    for (int a = 0; a < 3; ++a)
        CHECK(spec.length_nm[a] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("basis: parameter validation") {
    CHECK_THROWS_AS(build_basis({2, 2, 2}, {-1, 10, 10}, 4.285),
                    InvalidParameter);
    CHECK_THROWS_AS(build_basis({2, 2, 2}, {10, 10, 10}, 0.0), InvalidParameter);
    CHECK_THROWS_AS(build_basis({-1, 2, 2}, {10, 10, 10}, 4.285),
                    InvalidParameter);
}

TEST_CASE("basis: ladder matrix elements") {
    const double gamma1 = 4.285;
    const double homega = 2.0 * constants::hbar2_over_2m0 * gamma1 / 4.0;  // ℓ=2
    auto spec = build_basis({3, 3, 3}, {homega, homega, homega}, gamma1);

    auto x = operator_matrix(spec, {OpKind::X, 0});
    const int i01 = spec.index(0, 0, 0);
    const int i11 = spec.index(1, 0, 0);
    CHECK(std::abs(x.mat(i01, i11) - 2.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(x.mat(i01, i11).real() - 1.41421) < 1e-4);

    auto k2 = operator_matrix(spec, {OpKind::KK, 0, 0});
    CHECK(k2.mat(i01, i01).real() == doctest::Approx(0.125).epsilon(1e-12));

    auto par = operator_matrix(spec, {OpKind::Parity, 0});
    CHECK(par.mat(i11, i11).real() == doctest::Approx(-1.0));
    CHECK(par.mat(i01, i01).real() == doctest::Approx(1.0));
    // parity squared is the identity, exactly
    MatrixXcd p2 = par.mat * par.mat;
    CHECK((p2 - MatrixXcd::Identity(p2.rows(), p2.cols())).norm() == 0.0);
}

TEST_CASE("basis: <0|k^2|0> against a finite-difference grid oracle") {
    // phi_0(x) on a uniform grid; apply -d^2/dx^2 by central differences and
    // integrate. Independent of the ladder algebra above.
    const double l = 2.0;
    const double h = 0.002;
    const double span = 10.0 * l;
    const int n = static_cast<int>(2 * span / h) + 1;
    auto phi0 = [&](double x) {
        return std::pow(M_PI, -0.25) / std::sqrt(l) *
               std::exp(-x * x / (2 * l * l));
    };
    double acc = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double x = -span + i * h;
        const double d2 = (phi0(x + h) - 2.0 * phi0(x) + phi0(x - h)) / (h * h);
        acc += phi0(x) * (-d2) * h;
    }
    CHECK(acc == doctest::Approx(1.0 / (2.0 * l * l)).epsilon(1e-6));
}

TEST_CASE("basis: hermiticity of symmetric-label operators") {
    auto spec = build_basis({4, 3, 2}, {60, 50, 150}, 4.285);
    const std::vector<OpLabel> labels = {
        {OpKind::X, 0},        {OpKind::K, 1},        {OpKind::XX, 0, 0},
        {OpKind::XX, 0, 2},    {OpKind::KK, 1, 1},    {OpKind::KK, 0, 1},
        {OpKind::XKsym, 0, 0}, {OpKind::XKsym, 2, 0}, {OpKind::Parity, 2},
    };
    for (const auto& lab : labels) {
        auto op = operator_matrix(spec, lab);
        const double scale = op.mat.cwiseAbs().maxCoeff();
        const double asym = (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff();
        INFO("label ", to_string(lab));
        CHECK(asym < 1e-12 * std::max(scale, 1.0));
    }
}

TEST_CASE("basis: commutator [x,k] = i on interior states") {
    auto spec = build_basis({8, 8, 8}, {60, 60, 60}, 4.285);
    auto x = ops1d::position(spec, 0);
    auto k = ops1d::momentum(spec, 0);
    MatrixXcd c = x * k - k * x;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            const std::complex<double> expect =
                (i == j) ? std::complex<double>(0, 1) : 0.0;
            CHECK(std::abs(c(i, j) - expect) < 1e-10);
        }
}

TEST_CASE("basis: unsupported operator") {
    auto spec = build_basis({2, 2, 2}, {60, 60, 60}, 4.285);
    CHECK_THROWS_AS(operator_matrix(spec, {OpKind::X, 5}), InvalidParameter);
}

TEST_CASE("optimize_frequencies: recovers variational optimum") {
    // Gaussian trial energy of a 3D oscillator: per axis
    // E = ħω/4 + ħω*²/(4ω), minimized exactly at ω = ω*.
    const std::array<double, 3> target{40.0, 55.0, 180.0};
    auto energy = [&](const std::array<double, 3>& w) {
        double e = 0.0;
        for (int a = 0; a < 3; ++a)
            e += 0.25 * w[a] + 0.25 * target[a] * target[a] / w[a];
        return e;
    };
    auto res = optimize_frequencies(energy, {60.0, 30.0, 120.0}, 400);
    CHECK_FALSE(res.warning);
    for (int a = 0; a < 3; ++a)
        CHECK(res.homega_meV[a] == doctest::Approx(target[a]).epsilon(0.01));

    // monotone non-increase of the best energy across simplex steps
    for (size_t i = 1; i < res.best_trace.size(); ++i)
        CHECK(res.best_trace[i] <= res.best_trace[i - 1] + 1e-12);
}

TEST_CASE("optimize_frequencies: init at the optimum stays put") {
    auto energy = [](const std::array<double, 3>& w) {
        double e = 0.0;
        for (int a = 0; a < 3; ++a) e += 0.25 * w[a] + 0.25 * 2500.0 / w[a];
        return e;
    };
    auto res = optimize_frequencies(energy, {50.0, 50.0, 50.0}, 300);
    for (int a = 0; a < 3; ++a)
        CHECK(res.homega_meV[a] == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("optimize_frequencies: zero budget returns init with warning") {
    int calls = 0;
    auto energy = [&](const std::array<double, 3>&) {
        ++calls;
        return 1.0;
    };
    auto res = optimize_frequencies(energy, {10.0, 20.0, 30.0}, 0);
    CHECK(res.warning);
    CHECK(calls == 0);
    CHECK(res.homega_meV[0] == doctest::Approx(10.0));
    CHECK(res.homega_meV[1] == doctest::Approx(20.0));
    CHECK(res.homega_meV[2] == doctest::Approx(30.0));
}
