#include "holekp/solver.hpp"
#include "holekp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace holekp {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

namespace {

double inf_norm(const MatrixXcd& h) {
    double best = 0.0;
    for (long i = 0; i < h.rows(); ++i) {
        const double s = h.row(i).cwiseAbs().sum();
        best = std::max(best, s);
    }
    return best;
}

struct DenseResult {
    VectorXd values;
    MatrixXcd vectors;
};

DenseResult dense_lowest(const MatrixXcd& h, int k) {
    const int n = static_cast<int>(h.rows());
    MatrixXcd a = h;  // zheevr destroys its input
    DenseResult res;
    res.values.resize(n);
    res.vectors.resize(n, k);
    std::vector<int> isuppz(2 * std::max(1, k));
    int found = 0;
    const int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0,
        &found, res.values.data(), res.vectors.data(), n, isuppz.data());
    if (info != 0)
        throw NumericalError("zheevr failed, info=" + std::to_string(info));
    if (found < k)
        throw NumericalError("zheevr returned fewer eigenpairs than requested");
    res.values.conservativeResize(k);
    return res;
}

// Shift-invert block Lanczos (block size 2, full reorthogonalization) on a
// zhetrf factorization of H - sigma I.
class ShiftInvertOp {
public:
    ShiftInvertOp(const MatrixXcd& h, double sigma) : n_(h.rows()) {
        a_ = h;
        for (long i = 0; i < n_; ++i) a_(i, i) -= sigma;
        ipiv_.resize(n_);
        const int info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'L', n_, a_.data(), n_,
                                        ipiv_.data());
        if (info != 0)
            throw NumericalError("zhetrf failed, info=" + std::to_string(info));
    }

    MatrixXcd apply(const MatrixXcd& x) const {
        MatrixXcd b = x;
        const int info =
            LAPACKE_zhetrs(LAPACK_COL_MAJOR, 'L', n_, static_cast<int>(b.cols()),
                           a_.data(), n_, ipiv_.data(), b.data(), n_);
        if (info != 0)
            throw NumericalError("zhetrs failed, info=" + std::to_string(info));
        return b;
    }

private:
    long n_;
    MatrixXcd a_;
    std::vector<int> ipiv_;
};

// Rough lower bound for the spectrum: a few plain Lanczos steps.
double estimate_lambda_min(const MatrixXcd& h, unsigned seed, int steps) {
    const long n = h.rows();
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    VectorXcd v(n);
    for (long i = 0; i < n; ++i) v[i] = complex<double>(dist(rng), dist(rng));
    v.normalize();

    VectorXcd v_prev = VectorXcd::Zero(n);
    std::vector<double> alpha, beta;  // beta[j] links j and j+1
    double b_prev = 0.0;
    Eigen::MatrixXd t;
    double theta = 0.0;
    for (int j = 0; j < steps; ++j) {
        VectorXcd w = h * v;
        const double a = std::real(v.dot(w));
        alpha.push_back(a);
        w -= a * v + b_prev * v_prev;
        const double b = w.norm();
        if (b < 1e-14) break;
        beta.push_back(b);
        v_prev = v;
        v = w / b;
        b_prev = b;
    }
    const int m = static_cast<int>(alpha.size());
    std::vector<double> d(alpha), e(beta);
    e.resize(std::max(0, m - 1));
    const int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', m, d.data(), e.data(),
                                   nullptr, 1);
    if (info != 0)
        throw NumericalError("dstev failed in spectrum estimate");
    theta = d.empty() ? 0.0 : d.front();
    return theta;
}

struct IterResult {
    VectorXd values;
    MatrixXcd vectors;
    int iterations = 0;
};

IterResult shift_invert_lanczos(const MatrixXcd& h, int k, double h_norm,
                                const SolverOptions& opt) {
    const long n = h.rows();
    const int p = 2;  // block size; Kramers pairs come in twos

    const double theta_min = estimate_lambda_min(h, opt.seed, 40);
    const double sigma = theta_min - std::max(5.0, 1e-3 * h_norm);
    ShiftInvertOp op(h, sigma);

    std::mt19937 rng(opt.seed + 1);
    std::normal_distribution<double> dist;
    auto random_block = [&] {
        MatrixXcd b(n, p);
        for (long i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j)
                b(i, j) = complex<double>(dist(rng), dist(rng));
        return b;
    };

    std::vector<MatrixXcd> vs;      // orthonormal blocks
    std::vector<MatrixXcd> as, bs;  // T blocks: diagonal and sub-diagonal

    auto reorthogonalize = [&](MatrixXcd& w) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& vb : vs) w -= vb * (vb.adjoint() * w).eval();
    };
    auto qr_block = [&](MatrixXcd& w, MatrixXcd& r) {
        // modified Gram-Schmidt on p columns; rank-deficient columns are
        // replaced with fresh random directions (restarted subspace)
        r = MatrixXcd::Zero(p, p);
        for (int j = 0; j < p; ++j) {
            for (int i = 0; i < j; ++i) {
                const complex<double> proj = w.col(i).dot(w.col(j));
                r(i, j) = proj;
                w.col(j) -= proj * w.col(i);
            }
            double nrm = w.col(j).norm();
            if (nrm < 1e-12) {
                VectorXcd fresh = random_block().col(0);
                w.col(j) = fresh;
                reorthogonalize(w);
                for (int i = 0; i < j; ++i)
                    w.col(j) -= w.col(i).dot(w.col(j)) * w.col(i);
                nrm = w.col(j).norm();
                r(j, j) = 0.0;
                w.col(j) /= nrm;
                continue;
            }
            r(j, j) = nrm;
            w.col(j) /= nrm;
        }
    };

    MatrixXcd v = random_block();
    {
        MatrixXcd r;
        qr_block(v, r);
    }
    vs.push_back(v);

    IterResult out;
    const double tol_abs = opt.residual_tol * h_norm;

    for (int j = 0; j < opt.max_blocks; ++j) {
        MatrixXcd w = op.apply(vs.back());
        if (j > 0) w -= vs[j - 1] * bs[j - 1].adjoint();
        MatrixXcd aj = vs.back().adjoint() * w;
        aj = 0.5 * (aj + aj.adjoint()).eval();
        w -= vs.back() * aj;
        reorthogonalize(w);
        as.push_back(aj);

        MatrixXcd bj;
        qr_block(w, bj);

        // Ritz extraction every few blocks
        const int m = static_cast<int>(as.size()) * p;
        const bool check = (j >= 3 && j % 2 == 1) || j == opt.max_blocks - 1;
        if (check && m >= k) {
            MatrixXcd t = MatrixXcd::Zero(m, m);
            for (size_t i = 0; i < as.size(); ++i)
                t.block(i * p, i * p, p, p) = as[i];
            for (size_t i = 0; i + 1 < as.size(); ++i) {
                t.block((i + 1) * p, i * p, p, p) = bs[i];
                t.block(i * p, (i + 1) * p, p, p) = bs[i].adjoint();
            }
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(t);
            // largest thetas of (H - sigma)^-1 <-> lowest eigenvalues of H
            VectorXd thetas = es.eigenvalues();
            MatrixXcd sv = es.eigenvectors();

            std::vector<int> order(m);
            for (int i = 0; i < m; ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return thetas[a] > thetas[b]; });

            MatrixXcd ritz(n, k);
            VectorXd lam(k);
            bool ok = true;
            for (int i = 0; i < k; ++i) {
                const double th = thetas[order[i]];
                if (th <= 0.0) { ok = false; break; }
                lam[i] = sigma + 1.0 / th;
                VectorXcd y = VectorXcd::Zero(n);
                for (int bidx = 0; bidx < m / p; ++bidx)
                    y += vs[bidx] * sv.block(bidx * p, order[i], p, 1);
                y.normalize();
                ritz.col(i) = y;
            }
            if (ok) {
                double worst = 0.0;
                for (int i = 0; i < k; ++i) {
                    const double res = (h * ritz.col(i) - lam[i] * ritz.col(i)).norm();
                    worst = std::max(worst, res);
                }
                if (worst < tol_abs) {
                    std::vector<int> perm(k);
                    for (int i = 0; i < k; ++i) perm[i] = i;
                    std::sort(perm.begin(), perm.end(),
                              [&](int a, int b) { return lam[a] < lam[b]; });
                    out.values.resize(k);
                    out.vectors.resize(n, k);
                    for (int i = 0; i < k; ++i) {
                        out.values[i] = lam[perm[i]];
                        out.vectors.col(i) = ritz.col(perm[i]);
                    }
                    out.iterations = j + 1;
                    return out;
                }
            }
        }

        vs.push_back(w);
        bs.push_back(bj);
    }
    throw NumericalError(
        "shift-invert Lanczos did not converge within the block budget");
}

} // namespace

Spectrum lowest_eigenpairs(const HamiltonianMatrix& h, int k,
                           const SolverOptions& opt) {
    const long n = h.mat.rows();
    if (k < 2) throw InvalidParameter("lowest_eigenpairs: k must be >= 2");
    if (k > n)
        throw InvalidParameter("lowest_eigenpairs: k exceeds matrix dimension");

    const double h_norm = inf_norm(h.mat);
    if (!(h_norm > 0.0) || !std::isfinite(h_norm))
        throw NumericalError("lowest_eigenpairs: matrix norm not finite");

    bool dense = true;
    switch (opt.method) {
        case SolverOptions::Method::automatic:
            dense = n <= opt.dense_threshold;
            break;
        case SolverOptions::Method::dense: dense = true; break;
        case SolverOptions::Method::iterative: dense = false; break;
    }

    Spectrum spec;
    spec.band_count = h.band_count;
    VectorXd values;
    MatrixXcd vectors;
    if (dense) {
        auto res = dense_lowest(h.mat, k);
        values = res.values;
        vectors = std::move(res.vectors);
        spec.info.method = "dense-zheevr";
    } else {
        auto res = shift_invert_lanczos(h.mat, k, h_norm, opt);
        values = res.values;
        vectors = std::move(res.vectors);
        spec.info.method = "shift-invert-lanczos";
        spec.info.iterations = res.iterations;
    }

    double worst = 0.0;
    spec.states.resize(k);
    for (int i = 0; i < k; ++i) {
        SpinorState s;
        s.coeff = vectors.col(i);
        s.energy_meV = values[i];
        s.band_count = h.band_count;
        const double res = (h.mat * s.coeff - values[i] * s.coeff).norm();
        worst = std::max(worst, res / h_norm);
        spec.states[i] = std::move(s);
    }
    spec.info.max_residual = worst;
    if (worst > 1e-8)
        throw NumericalError("eigensolver residual too large: " +
                             std::to_string(worst));
    return spec;
}

VectorXcd time_reverse(const VectorXcd& coeff, int band_count) {
    if (band_count != 4 && band_count != 6)
        throw InvalidParameter("time_reverse: band_count must be 4 or 6");
    const long dim = coeff.size() / band_count;
    VectorXcd out(coeff.size());
    for (long n = 0; n < dim; ++n) {
        const long o = n * band_count;
        // Θ |n,(J,M)> = (-1)^{J+M} |n,(J,-M)> with conjugated envelope
        out[o + 3] = -std::conj(coeff[o + 0]);
        out[o + 2] = std::conj(coeff[o + 1]);
        out[o + 1] = -std::conj(coeff[o + 2]);
        out[o + 0] = std::conj(coeff[o + 3]);
        if (band_count == 6) {
            out[o + 5] = -std::conj(coeff[o + 4]);
            out[o + 4] = std::conj(coeff[o + 5]);
        }
    }
    return out;
}

SpinorState time_reverse(const SpinorState& s) {
    SpinorState out = s;
    out.coeff = time_reverse(s.coeff, s.band_count);
    return out;
}

namespace {

void fix_phase_largest(VectorXcd& v) {
    long imax = 0;
    double best = 0.0;
    for (long i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) { best = a; imax = i; }
    }
    if (best == 0.0) return;
    const complex<double> phase = v[imax] / best;
    v /= phase;
}

} // namespace

Spectrum kramers_pair(Spectrum spectrum, const MagneticField& field,
                      const KramersOptions& opt) {
    auto& st = spectrum.states;
    if (st.size() < 2)
        throw InvalidParameter("kramers_pair: need at least one doublet");
    if (st.size() % 2 != 0) st.pop_back();

    const bool zero_field = field.b_tesla == 0.0;
    const int bc = spectrum.band_count;

    for (size_t i = 0; i + 1 < st.size(); i += 2) {
        const double gap_in = st[i + 1].energy_meV - st[i].energy_meV;
        if (i + 2 < st.size()) {
            const double gap_next = st[i + 2].energy_meV - st[i + 1].energy_meV;
            if (zero_field && gap_in < opt.pairing_tol_meV &&
                gap_next < opt.pairing_tol_meV)
                throw NumericalError(
                    "kramers_pair: three quasi-degenerate states around doublet " +
                    std::to_string(i / 2 + 1));
        }
        if (zero_field && gap_in > opt.pairing_tol_meV)
            throw NumericalError("kramers_pair: doublet " +
                                 std::to_string(i / 2 + 1) +
                                 " not degenerate at B=0 (gap " +
                                 std::to_string(gap_in) + " meV)");

        const int m = static_cast<int>(i / 2) + 1;
        st[i].doublet = m;
        st[i + 1].doublet = m;

        if (zero_field) {
            VectorXcd up = st[i + 1].coeff;
            fix_phase_largest(up);
            VectorXcd dn = -time_reverse(up, bc);
            st[i + 1].coeff = up;
            st[i + 1].member = 'u';
            st[i].coeff = dn;
            st[i].member = 'd';
        } else {
            // lower member is ⇓ unless an adiabatic reference says otherwise
            int idn = static_cast<int>(i), iup = static_cast<int>(i) + 1;
            if (opt.reference && opt.reference->states.size() > i + 1) {
                const auto& rdn = opt.reference->states[i].coeff;
                const auto& rup = opt.reference->states[i + 1].coeff;
                const double keep = std::norm(rdn.dot(st[idn].coeff)) +
                                    std::norm(rup.dot(st[iup].coeff));
                const double swap = std::norm(rup.dot(st[idn].coeff)) +
                                    std::norm(rdn.dot(st[iup].coeff));
                if (swap > keep) std::swap(idn, iup);
            }
            fix_phase_largest(st[iup].coeff);
            // Θ-lock the ⇓ phase: <⇓|Θ⇑> real negative, continuous with B→0
            const VectorXcd th_up = time_reverse(st[iup].coeff, bc);
            const complex<double> ov = st[idn].coeff.dot(th_up);
            if (std::abs(ov) > 1e-12) st[idn].coeff *= (-ov / std::abs(ov));
            st[idn].member = 'd';
            st[iup].member = 'u';
        }
    }

    if (st.size() >= 4) {
        const double e1 = 0.5 * (st[0].energy_meV + st[1].energy_meV);
        const double e2 = 0.5 * (st[2].energy_meV + st[3].energy_meV);
        spectrum.gap_meV = e2 - e1;
    }
    return spectrum;
}

} // namespace holekp
