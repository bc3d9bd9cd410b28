#include "holekp/hamiltonian.hpp"
#include "holekp/constants.hpp"
#include "holekp/kernels.hpp"
#include "holekp/quadrature.hpp"

#include <cmath>

namespace holekp {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using std::complex;

namespace {
constexpr double kB2M = constants::hbar2_over_2m0;  // meV nm^2
const complex<double> I1{0.0, 1.0};
}

void LuttingerParams::validate() const {
    if (gamma1 <= 0) throw InvalidParameter("LuttingerParams: gamma1 must be > 0");
    if (delta_so_meV < 0)
        throw InvalidParameter("LuttingerParams: delta_so must be >= 0");
    if (band_count != 4 && band_count != 6)
        throw InvalidParameter("LuttingerParams: band_count must be 4 or 6");
}

Vector3d MagneticField::unit() const {
    if (axis_ >= 0) {
        Vector3d u = Vector3d::Zero();
        u[axis_] = 1.0;
        return u;
    }
    const double th = theta_deg * M_PI / 180.0;
    const double ph = phi_deg * M_PI / 180.0;
    return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
            std::cos(th)};
}

MagneticField MagneticField::from_angles(double b, double theta, double phi) {
    if (b < 0) throw InvalidParameter("MagneticField: B must be >= 0");
    MagneticField f;
    f.b_tesla = b;
    f.theta_deg = theta;
    f.phi_deg = phi;
    return f;
}

MagneticField MagneticField::along_axis(double b, int axis) {
    if (b < 0) throw InvalidParameter("MagneticField: B must be >= 0");
    if (axis < 0 || axis > 2) throw InvalidParameter("MagneticField: bad axis");
    MagneticField f;
    f.b_tesla = b;
    f.axis_ = axis;
    f.theta_deg = (axis == 2) ? 0.0 : 90.0;
    f.phi_deg = (axis == 1) ? 90.0 : 0.0;
    return f;
}

// ---------------------------------------------------------------------------
// band-space structure

namespace {

// Placement of an orbital operator inside the 6x6 band matrix; upper
// triangle only, the conjugate side is filled from the adjoint.
struct Placement {
    int row, col;
    complex<double> coeff;
    bool dagger = false;
};

const std::vector<Placement>& placements_p() {
    static const std::vector<Placement> v = {
        {0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0},
        {3, 3, 1.0}, {4, 4, 1.0}, {5, 5, 1.0}};
    return v;
}
const std::vector<Placement>& placements_q() {
    static const double s2 = std::sqrt(2.0);
    static const std::vector<Placement> v = {
        {0, 0, 1.0}, {1, 1, -1.0}, {2, 2, -1.0}, {3, 3, 1.0},
        {1, 4, -s2}, {2, 5, s2}};
    return v;
}
const std::vector<Placement>& placements_r() {
    static const double s2 = std::sqrt(2.0);
    static const std::vector<Placement> v = {
        {0, 2, 1.0}, {1, 3, 1.0}, {0, 5, s2}, {3, 4, -s2, true}};
    return v;
}
const std::vector<Placement>& placements_s() {
    static const double is2 = 1.0 / std::sqrt(2.0);
    static const double s32 = std::sqrt(1.5);
    static const std::vector<Placement> v = {
        {0, 1, -1.0}, {2, 3, 1.0}, {0, 4, -is2}, {1, 5, s32},
        {2, 4, s32, true}, {3, 5, -is2, true}};
    return v;
}

// H[n*bc + r, n'*bc + c] += coeff * Op[n, n']  (plus the adjoint mirror)
void place_block(MatrixXcd& h, const MatrixXcd& op, int band_count,
                 const Placement& p) {
    if (p.row >= band_count || p.col >= band_count) return;
    const long dim = op.rows();
    const long ld = h.rows();
    using Stride = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
    using Block = Eigen::Map<MatrixXcd, 0, Stride>;
    auto block = [&](int r, int c) {
        return Block(h.data() + static_cast<long>(c) * ld + r, dim, dim,
                     Stride(static_cast<long>(band_count) * ld, band_count));
    };
    if (p.row == p.col) {
        if (p.dagger)
            block(p.row, p.col) += p.coeff * op.adjoint();
        else
            block(p.row, p.col) += p.coeff * op;
        return;
    }
    if (p.dagger) {
        block(p.row, p.col) += p.coeff * op.adjoint();
        block(p.col, p.row) += std::conj(p.coeff) * op;
    } else {
        block(p.row, p.col) += p.coeff * op;
        block(p.col, p.row) += std::conj(p.coeff) * op.adjoint();
    }
}

void place_operator(MatrixXcd& h, const MatrixXcd& op, int band_count,
                    const std::vector<Placement>& places) {
    for (const auto& p : places) place_block(h, op, band_count, p);
}

// Symmetrized bilinears Sym(K_a K_b) split by order in B.
class BilinearProvider {
public:
    BilinearProvider(const BasisSpec& spec, const Vector3d& bvec)
        : spec_(spec) {
        const double s = 0.5 * constants::e_over_hbar;
        // a_x = s (B_y z - B_z y), a_y = s (B_z x - B_x z), a_z = s (B_x y - B_y x)
        c_ = Eigen::Matrix3d::Zero();
        c_(0, 1) = -s * bvec[2];
        c_(0, 2) = s * bvec[1];
        c_(1, 0) = s * bvec[2];
        c_(1, 2) = -s * bvec[0];
        c_(2, 0) = -s * bvec[1];
        c_(2, 1) = s * bvec[0];
    }

    MatrixXcd order0(int a, int b) const {
        if (a == b) return one_axis(a, ops1d::momentum_sq(spec_, a));
        return two_axis(a, ops1d::momentum(spec_, a), b, ops1d::momentum(spec_, b));
    }

    // (1/2)({k_a, A_b} + {k_b, A_a}) with A expanded over positions
    MatrixXcd order1(int a, int b) const {
        MatrixXcd sum = zero();
        for (int g = 0; g < 3; ++g) {
            if (c_(b, g) != 0.0) sum += c_(b, g) * sym_kx(a, g);
            if (c_(a, g) != 0.0) sum += c_(a, g) * sym_kx(b, g);
        }
        return sum;
    }

    MatrixXcd order2(int a, int b) const {
        MatrixXcd sum = zero();
        for (int g = 0; g < 3; ++g)
            for (int d = 0; d < 3; ++d) {
                const double w = c_(a, g) * c_(b, d);
                if (w == 0.0) continue;
                sum += w * xx(g, d);
            }
        return sum;
    }

private:
    MatrixXcd zero() const {
        const int n = spec_.orbital_dim();
        return MatrixXcd::Zero(n, n);
    }
    MatrixXcd one_axis(int axis, const MatrixXcd& m) const {
        std::array<MatrixXcd, 3> f{ops1d::identity(spec_, 0),
                                   ops1d::identity(spec_, 1),
                                   ops1d::identity(spec_, 2)};
        f[axis] = m;
        return kron3(f[0], f[1], f[2]);
    }
    MatrixXcd two_axis(int ax, const MatrixXcd& ma, int bx,
                       const MatrixXcd& mb) const {
        std::array<MatrixXcd, 3> f{ops1d::identity(spec_, 0),
                                   ops1d::identity(spec_, 1),
                                   ops1d::identity(spec_, 2)};
        f[ax] = ma;
        f[bx] = mb;
        return kron3(f[0], f[1], f[2]);
    }
    MatrixXcd sym_kx(int ka, int xg) const {
        if (ka == xg) return one_axis(ka, ops1d::xk_sym(spec_, ka));
        return two_axis(ka, ops1d::momentum(spec_, ka), xg,
                        ops1d::position(spec_, xg));
    }
    MatrixXcd xx(int g, int d) const {
        if (g == d) return one_axis(g, ops1d::position_sq(spec_, g));
        return two_axis(g, ops1d::position(spec_, g), d, ops1d::position(spec_, d));
    }

    const BasisSpec& spec_;
    Eigen::Matrix3d c_;
};

enum class Order { kinetic, paramagnetic, diamagnetic };

void add_kp_structure(MatrixXcd& h, const BasisSpec& spec,
                      const LuttingerParams& lut, const Vector3d& bvec,
                      Order order) {
    BilinearProvider prov(spec, bvec);
    auto T = [&](int a, int b) {
        switch (order) {
            case Order::kinetic: return prov.order0(a, b);
            case Order::paramagnetic: return prov.order1(a, b);
            case Order::diamagnetic: return prov.order2(a, b);
        }
        return prov.order0(a, b);
    };

    const int bc = lut.band_count;
    const MatrixXcd txx = T(0, 0), tyy = T(1, 1), tzz = T(2, 2);

    const MatrixXcd p_op = kB2M * lut.gamma1 * (txx + tyy + tzz);
    place_operator(h, p_op, bc, placements_p());

    const MatrixXcd q_op = kB2M * lut.gamma2 * (txx + tyy - 2.0 * tzz);
    place_operator(h, q_op, bc, placements_q());

    if (lut.couple_r) {
        const MatrixXcd r_op =
            kB2M * std::sqrt(3.0) *
            (-lut.gamma3 * (txx - tyy) + 2.0 * I1 * lut.gamma2 * T(0, 1));
        place_operator(h, r_op, bc, placements_r());
    }
    if (lut.couple_s) {
        const MatrixXcd s_op =
            kB2M * 2.0 * std::sqrt(3.0) * lut.gamma3 * (T(0, 2) - I1 * T(1, 2));
        place_operator(h, s_op, bc, placements_s());
    }

    if (order == Order::kinetic && bc == 6 && lut.delta_so_meV != 0.0) {
        const int dim = spec.orbital_dim();
        for (int n = 0; n < dim; ++n) {
            h(n * 6 + 4, n * 6 + 4) += lut.delta_so_meV;
            h(n * 6 + 5, n * 6 + 5) += lut.delta_so_meV;
        }
    }
}

// Zeeman-Bloch band matrix in meV (entries proportional to mu_B).
Eigen::Matrix<complex<double>, 6, 6> zeeman_band_matrix(double kappa,
                                                        const Vector3d& b) {
    using M6 = Eigen::Matrix<complex<double>, 6, 6>;
    const double k = kappa;
    const double k1 = kappa + 1.0;
    const complex<double> bp{b[0], b[1]};        // B_x + i B_y
    const complex<double> bpc = std::conj(bp);
    const double bz = b[2];
    const double r3 = std::sqrt(3.0);
    const double r2 = std::sqrt(2.0);
    const double r32 = std::sqrt(1.5);
    const double ir2 = 1.0 / std::sqrt(2.0);

    M6 m = M6::Zero();
    m(0, 0) = 3.0 * k * bz;
    m(0, 1) = r3 * k * bpc;
    m(0, 4) = r32 * k1 * bpc;
    m(1, 0) = r3 * k * bp;
    m(1, 1) = k * bz;
    m(1, 2) = 2.0 * k * bpc;
    m(1, 4) = -r2 * k1 * bz;
    m(1, 5) = ir2 * k1 * bpc;
    m(2, 1) = 2.0 * k * bp;
    m(2, 2) = -k * bz;
    m(2, 3) = r3 * k * bpc;
    m(2, 4) = -ir2 * k1 * bp;
    m(2, 5) = -r2 * k1 * bz;
    m(3, 2) = r3 * k * bp;
    m(3, 3) = -3.0 * k * bz;
    m(3, 5) = -r32 * k1 * bp;
    m(4, 0) = r32 * k1 * bp;
    m(4, 1) = -r2 * k1 * bz;
    m(4, 2) = -ir2 * k1 * bpc;
    m(4, 4) = (2.0 * k + 1.0) * bz;
    m(4, 5) = (2.0 * k + 1.0) * bpc;
    m(5, 1) = ir2 * k1 * bp;
    m(5, 2) = -r2 * k1 * bz;
    m(5, 3) = -r32 * k1 * bpc;
    m(5, 4) = (2.0 * k + 1.0) * bp;
    m(5, 5) = -(2.0 * k + 1.0) * bz;
    return constants::mu_B * m;
}

MatrixXcd new_spinor_matrix(const BasisSpec& spec, int band_count) {
    const long dim = static_cast<long>(spec.orbital_dim()) * band_count;
    return MatrixXcd::Zero(dim, dim);
}

} // namespace

HamiltonianMatrix assemble_kp(const BasisSpec& spec, const LuttingerParams& lut) {
    lut.validate();
    HamiltonianMatrix out;
    out.band_count = lut.band_count;
    out.orbital_dim = spec.orbital_dim();
    out.mat = new_spinor_matrix(spec, lut.band_count);
    add_kp_structure(out.mat, spec, lut, Vector3d::Zero(), Order::kinetic);
    return out;
}

HamiltonianMatrix assemble_zeeman(const BasisSpec& spec,
                                  const LuttingerParams& lut,
                                  const MagneticField& field) {
    lut.validate();
    HamiltonianMatrix out;
    out.band_count = lut.band_count;
    out.orbital_dim = spec.orbital_dim();
    out.field = field;
    out.mat = new_spinor_matrix(spec, lut.band_count);
    if (field.b_tesla == 0.0) return out;

    const auto z6 = zeeman_band_matrix(lut.kappa, field.vec());
    const int bc = lut.band_count;
    const int dim = spec.orbital_dim();
    for (int n = 0; n < dim; ++n)
        out.mat.block(n * bc, n * bc, bc, bc) = z6.topLeftCorner(bc, bc);
    return out;
}

FieldOrbitalParts assemble_field_orbital(const BasisSpec& spec,
                                         const LuttingerParams& lut,
                                         const MagneticField& field) {
    lut.validate();
    FieldOrbitalParts out;
    for (auto* part : {&out.paramagnetic, &out.diamagnetic}) {
        part->band_count = lut.band_count;
        part->orbital_dim = spec.orbital_dim();
        part->field = field;
        part->mat = new_spinor_matrix(spec, lut.band_count);
    }
    if (field.b_tesla == 0.0) return out;
    const Vector3d bvec = field.vec();
    add_kp_structure(out.paramagnetic.mat, spec, lut, bvec, Order::paramagnetic);
    add_kp_structure(out.diamagnetic.mat, spec, lut, bvec, Order::diamagnetic);
    return out;
}

HamiltonianMatrix project_potential(const BasisSpec& spec,
                                    const LuttingerParams& lut,
                                    const PotentialField& field,
                                    const PotentialProjector* projector) {
    lut.validate();
    HamiltonianMatrix out;
    out.band_count = lut.band_count;
    out.orbital_dim = spec.orbital_dim();
    out.mat = new_spinor_matrix(spec, lut.band_count);

    MatrixXd u;
    if (projector) {
        u = projector->project(field);
    } else {
        PotentialProjector local(spec);
        u = local.project(field);
    }
    const int bc = lut.band_count;
    const int dim = spec.orbital_dim();
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            const double v = u(m, n);
            if (v == 0.0) continue;
            for (int b = 0; b < bc; ++b) out.mat(m * bc + b, n * bc + b) += v;
        }
    return out;
}

HamiltonianMatrix assemble_total(const BasisSpec& spec, const LuttingerParams& lut,
                                 const PotentialField& field,
                                 const MagneticField& bfield, const TermMask& mask,
                                 const PotentialProjector* projector) {
    HamiltonianMatrix h = project_potential(spec, lut, field, projector);
    h.field = bfield;
    h.v_gate = field.gate_voltage();
    add_kp_structure(h.mat, spec, lut, Vector3d::Zero(), Order::kinetic);

    if (bfield.b_tesla > 0.0) {
        const Vector3d bvec = bfield.vec();
        if (mask.zeeman) {
            const auto z6 = zeeman_band_matrix(lut.kappa, bvec);
            const int bc = lut.band_count;
            for (int n = 0; n < spec.orbital_dim(); ++n)
                h.mat.block(n * bc, n * bc, bc, bc) += z6.topLeftCorner(bc, bc);
        }
        if (mask.paramagnetic)
            add_kp_structure(h.mat, spec, lut, bvec, Order::paramagnetic);
        if (mask.diamagnetic)
            add_kp_structure(h.mat, spec, lut, bvec, Order::diamagnetic);
    }
    return h;
}

Eigen::MatrixXcd field_derivative_matrix(const BasisSpec& spec,
                                         const LuttingerParams& lut, int axis) {
    lut.validate();
    MatrixXcd m = new_spinor_matrix(spec, lut.band_count);
    Vector3d b = Vector3d::Zero();
    b[axis] = 1.0;

    const auto z6 = zeeman_band_matrix(lut.kappa, b);
    const int bc = lut.band_count;
    for (int n = 0; n < spec.orbital_dim(); ++n)
        m.block(n * bc, n * bc, bc, bc) += z6.topLeftCorner(bc, bc);

    add_kp_structure(m, spec, lut, b, Order::paramagnetic);
    return m;
}

// ---------------------------------------------------------------------------
// potential projection

struct PotentialProjector::Impl {
    BasisSpec spec;
    std::array<int, 3> npts{};
    std::array<std::vector<double>, 3> tnodes;    // dimensionless
    std::array<std::vector<double>, 3> xnodes;    // physical, x = l * t
    std::array<std::vector<double>, 3> pair_tab;  // [pairs x npts], carries weights
    std::array<std::vector<double>, 3> pair_tab_t;  // transposed [npts x pairs]
    std::array<std::vector<std::pair<int, int>>, 3> pairs;
    std::array<std::vector<int>, 3> pair_index;   // (a,b) -> pair row
};

PotentialProjector::PotentialProjector(const BasisSpec& spec, int points_per_axis)
    : impl_(std::make_unique<Impl>()) {
    impl_->spec = spec;
    for (int ax = 0; ax < 3; ++ax) {
        const int n1 = spec.n_max[ax] + 1;
        const int npts = points_per_axis > 0
                             ? points_per_axis
                             : std::max(2 * spec.n_max[ax] + 16, 48);
        impl_->npts[ax] = npts;

        const quad::Rule rule = quad::gauss_hermite_flattened(npts);
        impl_->tnodes[ax] = rule.nodes;
        impl_->xnodes[ax].resize(npts);
        for (int k = 0; k < npts; ++k)
            impl_->xnodes[ax][k] = spec.length_nm[ax] * rule.nodes[k];

        const std::vector<double> psi =
            quad::hermite_functions(spec.n_max[ax], rule.nodes);

        auto& pairs = impl_->pairs[ax];
        auto& pidx = impl_->pair_index[ax];
        pidx.assign(static_cast<size_t>(n1) * n1, -1);
        for (int a = 0; a < n1; ++a)
            for (int b = a; b < n1; ++b) {
                pidx[static_cast<size_t>(a) * n1 + b] =
                    pidx[static_cast<size_t>(b) * n1 + a] =
                        static_cast<int>(pairs.size());
                pairs.emplace_back(a, b);
            }

        auto& tab = impl_->pair_tab[ax];
        tab.resize(pairs.size() * npts);
        for (size_t p = 0; p < pairs.size(); ++p) {
            const auto [a, b] = pairs[p];
            for (int k = 0; k < npts; ++k)
                tab[p * npts + k] = rule.weights[k] *
                                    psi[static_cast<size_t>(a) * npts + k] *
                                    psi[static_cast<size_t>(b) * npts + k];
        }
        auto& tabt = impl_->pair_tab_t[ax];
        tabt.resize(tab.size());
        for (size_t p = 0; p < pairs.size(); ++p)
            for (int k = 0; k < npts; ++k)
                tabt[static_cast<size_t>(k) * pairs.size() + p] = tab[p * npts + k];
    }
}

PotentialProjector::~PotentialProjector() = default;
PotentialProjector::PotentialProjector(PotentialProjector&&) noexcept = default;

const BasisSpec& PotentialProjector::spec() const { return impl_->spec; }
int PotentialProjector::points(int axis) const { return impl_->npts[axis]; }

Eigen::MatrixXd PotentialProjector::project(const PotentialField& field) const {
    const auto& im = *impl_;
    const int gx = im.npts[0], gy = im.npts[1], gz = im.npts[2];
    const auto& xs = im.xnodes[0];
    const auto& ys = im.xnodes[1];
    const auto& zs = im.xnodes[2];

    // potential on the tensor grid, z fastest
    std::vector<double> u(static_cast<size_t>(gx) * gy * gz);
    if (auto sep = field.separable_parts()) {
        std::vector<double> fx(gx), gxv(gx), fy(gy), fz(gz);
        for (int i = 0; i < gx; ++i) {
            fx[i] = sep->fx(xs[i]);
            gxv[i] = sep->gx(xs[i]);
        }
        for (int j = 0; j < gy; ++j) fy[j] = sep->fy(ys[j]);
        for (int k = 0; k < gz; ++k) fz[k] = sep->fz(zs[k]);
        std::vector<double> base(static_cast<size_t>(gx) * gy), cz(base.size());
        for (int i = 0; i < gx; ++i)
            for (int j = 0; j < gy; ++j) {
                base[static_cast<size_t>(i) * gy + j] =
                    fx[i] + fy[j] + sep->a * gxv[i];
                cz[static_cast<size_t>(i) * gy + j] = sep->b * gxv[i];
            }
        kern::combine_axis(base.data(), cz.data(), fz.data(), zs.data(), u.data(),
                           gx * gy, gz);
    } else {
        size_t idx = 0;
        for (int i = 0; i < gx; ++i)
            for (int j = 0; j < gy; ++j)
                for (int k = 0; k < gz; ++k)
                    u[idx++] = field.value(xs[i], ys[j], zs[k]);
    }
    for (double v : u)
        if (!std::isfinite(v))
            throw NumericalError("project: potential not finite on quadrature grid");

    const auto& pz = im.pairs[2];
    const auto& py = im.pairs[1];
    const auto& px = im.pairs[0];
    const int npz = static_cast<int>(pz.size());
    const int npy = static_cast<int>(py.size());
    const int npx = static_cast<int>(px.size());

    // contract z: r1[(i,j), pz] = sum_k u[(i,j),k] tabT_z[k, pz]
    std::vector<double> r1(static_cast<size_t>(gx) * gy * npz, 0.0);
    kern::matmul_acc(u.data(), im.pair_tab_t[2].data(), r1.data(), gx * gy, gz,
                     npz);

    // contract y per x-node: r2[i, py, pz] = sum_j tab_y[py, j] r1[i, j, pz]
    std::vector<double> r2(static_cast<size_t>(gx) * npy * npz, 0.0);
    for (int i = 0; i < gx; ++i)
        kern::matmul_acc(im.pair_tab[1].data(),
                         r1.data() + static_cast<size_t>(i) * gy * npz,
                         r2.data() + static_cast<size_t>(i) * npy * npz, npy, gy,
                         npz);

    // contract x: r3[px, py, pz] = sum_i tab_x[px, i] r2[i, (py,pz)]
    std::vector<double> r3(static_cast<size_t>(npx) * npy * npz, 0.0);
    kern::matmul_acc(im.pair_tab[0].data(), r2.data(), r3.data(), npx, gx,
                     npy * npz);

    // scatter into the symmetric orbital matrix
    const BasisSpec& spec = im.spec;
    const int dim = spec.orbital_dim();
    const int n1y = spec.n_max[1] + 1, n1z = spec.n_max[2] + 1,
              n1x = spec.n_max[0] + 1;
    MatrixXd m(dim, dim);
    const auto& ix = im.pair_index[0];
    const auto& iy = im.pair_index[1];
    const auto& iz = im.pair_index[2];
    for (int n = 0; n < dim; ++n) {
        const auto qn = spec.quanta(n);
        for (int nn = n; nn < dim; ++nn) {
            const auto qm = spec.quanta(nn);
            const int pxi = ix[static_cast<size_t>(qn[0]) * n1x + qm[0]];
            const int pyi = iy[static_cast<size_t>(qn[1]) * n1y + qm[1]];
            const int pzi = iz[static_cast<size_t>(qn[2]) * n1z + qm[2]];
            const double v =
                r3[(static_cast<size_t>(pxi) * npy + pyi) * npz + pzi];
            m(n, nn) = v;
            m(nn, n) = v;
        }
    }
    return m;
}

} // namespace holekp
