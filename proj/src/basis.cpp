#include "holekp/basis.hpp"
#include "holekp/constants.hpp"

#include <algorithm>
#include <cmath>

namespace holekp {

using Eigen::MatrixXcd;
using std::complex;

BasisSpec build_basis(const std::array<int, 3>& n_max,
                      const std::array<double, 3>& homega_meV, double gamma1) {
    if (gamma1 <= 0.0) throw InvalidParameter("build_basis: gamma1 must be > 0");
    for (int a = 0; a < 3; ++a) {
        if (n_max[a] < 0) throw InvalidParameter("build_basis: n_max must be >= 0");
        if (!(homega_meV[a] > 0.0))
            throw InvalidParameter("build_basis: ħω must be > 0 on every axis");
    }
    BasisSpec spec;
    spec.n_max = n_max;
    spec.homega_meV = homega_meV;
    spec.gamma1 = gamma1;
    // ℓ² = ħ/(mω) = 2 (ħ²/2m0) γ1 / ħω
    for (int a = 0; a < 3; ++a)
        spec.length_nm[a] =
            std::sqrt(2.0 * constants::hbar2_over_2m0 * gamma1 / homega_meV[a]);
    return spec;
}

namespace ops1d {

namespace {
int axis_dim(const BasisSpec& spec, int axis) {
    if (axis < 0 || axis > 2) throw InvalidParameter("axis out of range");
    return spec.n_max[axis] + 1;
}
} // namespace

MatrixXcd position(const BasisSpec& spec, int axis) {
    const int n = axis_dim(spec, axis);
    const double l = spec.length_nm[axis];
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        const double v = l * std::sqrt((i + 1) / 2.0);
        m(i + 1, i) = v;
        m(i, i + 1) = v;
    }
    return m;
}

MatrixXcd momentum(const BasisSpec& spec, int axis) {
    const int n = axis_dim(spec, axis);
    const double l = spec.length_nm[axis];
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        const double v = std::sqrt((i + 1) / 2.0) / l;
        m(i + 1, i) = complex<double>(0.0, v);
        m(i, i + 1) = complex<double>(0.0, -v);
    }
    return m;
}

MatrixXcd position_sq(const BasisSpec& spec, int axis) {
    const int n = axis_dim(spec, axis);
    const double l2 = spec.length_nm[axis] * spec.length_nm[axis];
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = l2 * (i + 0.5);
    for (int i = 0; i + 2 < n; ++i) {
        const double v = 0.5 * l2 * std::sqrt((i + 1.0) * (i + 2.0));
        m(i + 2, i) = v;
        m(i, i + 2) = v;
    }
    return m;
}

MatrixXcd momentum_sq(const BasisSpec& spec, int axis) {
    const int n = axis_dim(spec, axis);
    const double l2 = spec.length_nm[axis] * spec.length_nm[axis];
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = (i + 0.5) / l2;
    for (int i = 0; i + 2 < n; ++i) {
        const double v = -0.5 * std::sqrt((i + 1.0) * (i + 2.0)) / l2;
        m(i + 2, i) = v;
        m(i, i + 2) = v;
    }
    return m;
}

MatrixXcd xk_sym(const BasisSpec& spec, int axis) {
    // {x,k}/2 = (i/2)(a†² - a²); dimensionless
    const int n = axis_dim(spec, axis);
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (int i = 0; i + 2 < n; ++i) {
        const double v = 0.5 * std::sqrt((i + 1.0) * (i + 2.0));
        m(i + 2, i) = complex<double>(0.0, v);
        m(i, i + 2) = complex<double>(0.0, -v);
    }
    return m;
}

MatrixXcd parity(const BasisSpec& spec, int axis) {
    const int n = axis_dim(spec, axis);
    MatrixXcd m = MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
    return m;
}

MatrixXcd identity(const BasisSpec& spec, int axis) {
    return MatrixXcd::Identity(axis_dim(spec, axis), axis_dim(spec, axis));
}

} // namespace ops1d

MatrixXcd kron3(const MatrixXcd& x, const MatrixXcd& y, const MatrixXcd& z) {
    const long nx = x.rows(), ny = y.rows(), nz = z.rows();
    MatrixXcd out(nx * ny * nz, nx * ny * nz);
    for (long ix = 0; ix < nx; ++ix)
        for (long jx = 0; jx < nx; ++jx) {
            const complex<double> fx = x(ix, jx);
            for (long iy = 0; iy < ny; ++iy)
                for (long jy = 0; jy < ny; ++jy) {
                    const complex<double> fxy = fx * y(iy, jy);
                    const long row0 = (ix * ny + iy) * nz;
                    const long col0 = (jx * ny + jy) * nz;
                    if (fxy == 0.0) {
                        out.block(row0, col0, nz, nz).setZero();
                    } else {
                        out.block(row0, col0, nz, nz) = fxy * z;
                    }
                }
        }
    return out;
}

std::string to_string(const OpLabel& label) {
    static const char* ax = "xyz";
    switch (label.kind) {
        case OpKind::X: return std::string("x_") + ax[label.axis_a];
        case OpKind::K: return std::string("k_") + ax[label.axis_a];
        case OpKind::XX:
            return std::string("x_") + ax[label.axis_a] + "x_" + ax[label.axis_b];
        case OpKind::KK:
            return std::string("k_") + ax[label.axis_a] + "k_" + ax[label.axis_b];
        case OpKind::XKsym:
            return std::string("{x_") + ax[label.axis_a] + ",k_" +
                   ax[label.axis_b] + "}/2";
        case OpKind::Parity: return std::string("parity_") + ax[label.axis_a];
    }
    return "?";
}

OperatorMatrix operator_matrix(const BasisSpec& spec, const OpLabel& label) {
    const int a = label.axis_a, b = label.axis_b;
    if (a < 0 || a > 2 || b < 0 || b > 2)
        throw InvalidParameter("operator_matrix: unsupported operator axis");

    auto single = [&](int axis, const MatrixXcd& m1) {
        std::array<MatrixXcd, 3> f{ops1d::identity(spec, 0),
                                   ops1d::identity(spec, 1),
                                   ops1d::identity(spec, 2)};
        f[axis] = m1;
        return kron3(f[0], f[1], f[2]);
    };
    auto pair = [&](int axa, const MatrixXcd& ma, int axb, const MatrixXcd& mb) {
        std::array<MatrixXcd, 3> f{ops1d::identity(spec, 0),
                                   ops1d::identity(spec, 1),
                                   ops1d::identity(spec, 2)};
        f[axa] = ma;
        f[axb] = mb;
        return kron3(f[0], f[1], f[2]);
    };

    OperatorMatrix out;
    out.label = label;
    switch (label.kind) {
        case OpKind::X: out.mat = single(a, ops1d::position(spec, a)); break;
        case OpKind::K: out.mat = single(a, ops1d::momentum(spec, a)); break;
        case OpKind::XX:
            out.mat = (a == b) ? single(a, ops1d::position_sq(spec, a))
                               : pair(a, ops1d::position(spec, a), b,
                                      ops1d::position(spec, b));
            break;
        case OpKind::KK:
            out.mat = (a == b) ? single(a, ops1d::momentum_sq(spec, a))
                               : pair(a, ops1d::momentum(spec, a), b,
                                      ops1d::momentum(spec, b));
            break;
        case OpKind::XKsym:
            // {x_a, k_b}/2; cross-axis factors commute
            out.mat = (a == b) ? single(a, ops1d::xk_sym(spec, a))
                               : pair(a, ops1d::position(spec, a), b,
                                      ops1d::momentum(spec, b));
            break;
        case OpKind::Parity:
            out.mat = single(a, ops1d::parity(spec, a));
            break;
        default:
            throw InvalidParameter("operator_matrix: unsupported operator kind");
    }
    out.dim = static_cast<int>(out.mat.rows());
    return out;
}

OmegaOptResult optimize_frequencies(
    const std::function<double(const std::array<double, 3>&)>& ground_energy,
    const std::array<double, 3>& init, int budget, double tol_rel) {
    for (double w : init)
        if (!(w > 0.0))
            throw InvalidParameter("optimize_frequencies: init ħω must be > 0");

    OmegaOptResult res;
    res.homega_meV = init;
    if (budget <= 0) {
        res.energy = 0.0;
        res.warning = true;
        return res;
    }

    // Nelder-Mead on log(ħω); keeps the frequencies positive and the step
    // scale-free.
    using Vec = Eigen::Vector3d;
    auto to_omega = [](const Vec& v) {
        return std::array<double, 3>{std::exp(v[0]), std::exp(v[1]),
                                     std::exp(v[2])};
    };
    int evals = 0;
    auto f = [&](const Vec& v) {
        ++evals;
        return ground_energy(to_omega(v));
    };

    const double step = 0.18;
    std::array<Vec, 4> xs;
    std::array<double, 4> fs;
    xs[0] = Vec(std::log(init[0]), std::log(init[1]), std::log(init[2]));
    fs[0] = f(xs[0]);
    for (int i = 0; i < 3; ++i) {
        xs[i + 1] = xs[0];
        xs[i + 1][i] += step;
        if (evals >= budget) { // degenerate budget: fall back to best so far
            xs[i + 1] = xs[0];
        }
        fs[i + 1] = (evals < budget) ? f(xs[i + 1]) : fs[0] + 1.0;
    }

    auto order = [&] {
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<Vec, 4> x2;
        std::array<double, 4> f2;
        for (int i = 0; i < 4; ++i) {
            x2[i] = xs[idx[i]];
            f2[i] = fs[idx[i]];
        }
        xs = x2;
        fs = f2;
    };
    order();
    res.best_trace.push_back(fs[0]);

    bool converged = false;
    while (evals < budget) {
        const double spread = std::abs(fs[3] - fs[0]);
        const double scale = std::max(std::abs(fs[0]), 1e-12);
        if (spread < tol_rel * scale) {
            converged = true;
            break;
        }
        const Vec centroid = (xs[0] + xs[1] + xs[2]) / 3.0;
        const Vec xr = centroid + (centroid - xs[3]);
        const double fr = f(xr);
        if (fr < fs[0]) {
            const Vec xe = centroid + 2.0 * (centroid - xs[3]);
            const double fe = (evals < budget) ? f(xe) : fr + 1.0;
            if (fe < fr) {
                xs[3] = xe;
                fs[3] = fe;
            } else {
                xs[3] = xr;
                fs[3] = fr;
            }
        } else if (fr < fs[2]) {
            xs[3] = xr;
            fs[3] = fr;
        } else {
            const Vec xc = centroid + 0.5 * (xs[3] - centroid);
            const double fc = (evals < budget) ? f(xc) : fr + 1.0;
            if (fc < fs[3]) {
                xs[3] = xc;
                fs[3] = fc;
            } else {
                for (int i = 1; i < 4; ++i) {
                    xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
                    if (evals < budget) fs[i] = f(xs[i]);
                }
            }
        }
        order();
        res.best_trace.push_back(fs[0]);
    }

    res.homega_meV = to_omega(xs[0]);
    res.energy = fs[0];
    res.evaluations = evals;
    res.warning = !converged;
    return res;
}

} // namespace holekp
