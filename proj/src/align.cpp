#include "qloop/align.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qloop {

namespace {

LaurentMatrix conjugate_coefficients(const Matrix& left, const LaurentMatrix& a,
                                     const Matrix& right) {
    LaurentMatrix r(a.rows(), a.cols(), a.covering(), a.window());
    for (const auto& [k, m] : a.terms()) r.set_coeff(k, left * m * right);
    return r;
}

/// exp(x z^k), truncated at exponent cap; a series that terminates (nilpotent
/// x) keeps the exact window.
LaurentMatrix exp_term_to(const Matrix& x, int k, int cap) {
    int n = static_cast<int>(x.rows());
    std::map<int, Matrix> acc;
    acc.emplace(0, Matrix::Identity(n, n));
    Matrix power = Matrix::Identity(n, n);
    double factorial = 1.0;
    bool terminated = false;
    for (int j = 1; j * k <= cap; ++j) {
        power = power * x;
        factorial *= j;
        if (power.cwiseAbs().maxCoeff() == 0.0) {
            terminated = true;
            break;
        }
        acc.emplace(j * k, power / factorial);
    }
    Window w{0, terminated ? kExactWindow : cap};
    LaurentMatrix r(n, n, 1, w);
    for (const auto& [e, m] : acc)
        if (e <= w.hi) r.set_coeff(e, m);
    return r;
}

}  // namespace

LaurentMatrix check_integral(const LaurentMatrix& a, const ToleranceConfig& tol) {
    LaurentMatrix b = reduce_covering(a);
    double zero_tol = 1e-12 * std::max(1.0, b.max_norm());
    if (b.covering() != 1) {
        int k = b.min_exponent(zero_tol);
        std::ostringstream os;
        os << "fractional exponent " << k << "/" << b.covering()
           << " present; the loop does not lie in GL_n((z))";
        fail("NotIntegralRepresentative", os.str());
    }
    int lo = b.min_exponent(zero_tol);
    if (lo < 0) {
        std::ostringstream os;
        os << "negative exponent " << lo << " carries a nonzero coefficient "
           << "(largest entry " << b.coeff(lo).cwiseAbs().maxCoeff() << ")";
        fail("NotIntegralRepresentative", os.str());
    }
    if (b.window().hi < 0)
        fail("NotIntegralRepresentative", "window ends below exponent 0");
    Matrix a0 = b.coeff(0);
    Eigen::JacobiSVD<Matrix> svd(a0);
    int n = b.size();
    if (svd.singularValues()(0) == 0.0 ||
        svd.singularValues()(n - 1) <= tol.eps_eig * svd.singularValues()(0))
        fail("NotIntegralRepresentative",
             "constant term is singular within tolerance");
    LaurentMatrix out(n, n, 1, Window{0, b.window().hi});
    for (const auto& [k, m] : b.terms())
        if (k >= 0 && m.cwiseAbs().maxCoeff() > zero_tol) out.set_coeff(k, m);
    return out;
}

namespace {

struct WeightSolver {
    const JordanData& jd;
    Matrix a0hat;      // block diagonal over clusters
    std::vector<int> cluster_start, cluster_size;
    std::vector<Complex> reps;
    Complex q;
    double eps_res;

    WeightSolver(const JordanData& j, const Matrix& ahat, const ModulusConfig& cfg,
                 const ToleranceConfig& tol)
        : jd(j), a0hat(ahat), q(cfg.q()), eps_res(tol.eps_res) {
        int nc = static_cast<int>(jd.cluster_values.size());
        cluster_start.resize(nc);
        cluster_size = jd.cluster_mult;
        int pos = 0;
        for (int c = 0; c < nc; ++c) {
            cluster_start[c] = pos;
            pos += cluster_size[c];
        }
        reps = jd.cluster_values;
    }

    bool resonant(int ci, int cj, int k) const {
        Complex qk = std::pow(q, k);
        return std::abs(reps[ci] / reps[cj] - qk) < eps_res * std::abs(qk);
    }

    /// Splits rhs: the g_{q^k} part goes to *y; on every other cluster-pair
    /// block solves (q^k Ad(a0^{-1}) - Id) x = -rhs and returns x.
    Matrix split_and_solve(const Matrix& rhs, int k, Matrix* y) const {
        int n = static_cast<int>(rhs.rows());
        Matrix x = Matrix::Zero(n, n);
        *y = Matrix::Zero(n, n);
        int nc = static_cast<int>(reps.size());
        Complex qk = std::pow(q, k);
        for (int ci = 0; ci < nc; ++ci) {
            for (int cj = 0; cj < nc; ++cj) {
                int r0 = cluster_start[ci], rs = cluster_size[ci];
                int c0 = cluster_start[cj], cs = cluster_size[cj];
                Matrix block = rhs.block(r0, c0, rs, cs);
                if (resonant(ci, cj, k)) {
                    y->block(r0, c0, rs, cs) = block;
                    continue;
                }
                if (block.cwiseAbs().maxCoeff() == 0.0) continue;
                // vec(A X B) = (B^T kron A) vec(X) with column stacking
                Matrix ai = a0hat.block(r0, r0, rs, rs)
                                .fullPivLu()
                                .inverse();           // a0^{-1} on cluster ci
                Matrix bj = a0hat.block(c0, c0, cs, cs);  // a0 on cluster cj
                int d = rs * cs;
                Matrix t = Matrix::Zero(d, d);
                for (int p = 0; p < cs; ++p)
                    for (int s = 0; s < cs; ++s)
                        t.block(p * rs, s * rs, rs, rs) = qk * bj(s, p) * ai;
                t -= Matrix::Identity(d, d);
                Eigen::VectorXcd v(d);
                for (int col = 0; col < cs; ++col)
                    v.segment(col * rs, rs) = block.col(col);
                Eigen::VectorXcd sol = t.fullPivLu().solve(-v);
                for (int col = 0; col < cs; ++col)
                    x.block(r0, c0 + col, rs, 1) = sol.segment(col * rs, rs);
            }
        }
        return x;
    }
};

}  // namespace

AlignResult align(const LaurentMatrix& a_raw, const ModulusConfig& cfg,
                  const ToleranceConfig& tol) {
    LaurentMatrix a = check_integral(a_raw, tol);
    int n = a.size();
    JordanData jd = jordan_decomposition(a.coeff(0), tol);
    WeightData wd = weight_decomposition(jd, cfg, tol);
    int K = wd.K;
    if (!a.window().exact() && a.window().hi < K + 1) {
        std::ostringstream os;
        os << "input window ends at " << a.window().hi
           << " but alignment needs order " << K + 1;
        fail("WindowTooShort", os.str());
    }
    int H = a.window().exact()
                ? std::max({K + 1, a.max_exponent(), tol.trunc})
                : a.window().hi;

    Matrix p = jd.P;
    Matrix pinv = p.fullPivLu().inverse();
    LaurentMatrix lhat = conjugate_coefficients(pinv, a, p);
    lhat.shrink_hi(H);
    Matrix a0hat = lhat.coeff(0);
    Matrix a0hat_inv = a0hat.fullPivLu().inverse();
    LaurentMatrix a0hat_inv_ser = LaurentMatrix::constant(a0hat_inv);

    WeightSolver solver(jd, a0hat, cfg, tol);

    std::vector<Matrix> ys(K, Matrix::Zero(n, n));
    LaurentMatrix prefix = LaurentMatrix::identity(n);
    LaurentMatrix conj_hat = LaurentMatrix::identity(n);

    for (int k = 1; k <= H; ++k) {
        LaurentMatrix residual = multiply(prefix, multiply(a0hat_inv_ser, lhat));
        Matrix ak = log_series(residual, tol).coeff(k);
        Matrix yk;
        Matrix xk = solver.split_and_solve(ak, k, &yk);
        if (k <= K) ys[k - 1] = yk;
        if (xk.cwiseAbs().maxCoeff() > 0.0) {
            LaurentMatrix e = exp_term_to(xk, k, H);
            LaurentMatrix e_neg = exp_term_to(-xk, k, H);
            lhat = multiply(multiply(q_shift(e, cfg), lhat), e_neg);
            lhat.shrink_hi(H);
            conj_hat = multiply(e, conj_hat);
            conj_hat.shrink_hi(H);
        }
        if (k <= K && yk.cwiseAbs().maxCoeff() > 0.0) {
            prefix = multiply(exp_term_to(-yk, k, H), prefix);
            prefix.shrink_hi(H);
        }
    }

    AlignResult out;
    out.form.a0 = a.coeff(0);
    out.form.jordan = jd;
    out.form.K = K;
    out.form.xs.reserve(K);
    for (int k = 0; k < K; ++k) out.form.xs.push_back(p * ys[k] * pinv);
    out.conjugator = conjugate_coefficients(p, conj_hat, pinv);
    out.conjugator = out.conjugator.with_window(Window{0, H});
    return out;
}

LaurentMatrix expand_aligned(const AlignedForm& af, const ModulusConfig& cfg,
                             const ToleranceConfig& tol) {
    int n = static_cast<int>(af.a0.rows());
    Matrix p = af.jordan.P;
    Matrix pinv = p.fullPivLu().inverse();
    Matrix a0hat = pinv * af.a0 * p;
    WeightSolver solver(af.jordan, a0hat, cfg, tol);
    int nc = static_cast<int>(af.jordan.cluster_values.size());

    LaurentMatrix prod = LaurentMatrix::constant(a0hat);
    for (int k = 1; k <= af.K; ++k) {
        Matrix yhat = pinv * af.xs[k - 1] * p;
        // enforce the structural support: the weight component lives exactly
        // on the resonant cluster-pair blocks, everything else is projection
        // dust from the basis round trip
        Matrix ystruct = Matrix::Zero(n, n);
        for (int ci = 0; ci < nc; ++ci)
            for (int cj = 0; cj < nc; ++cj)
                if (solver.resonant(ci, cj, k))
                    ystruct.block(solver.cluster_start[ci], solver.cluster_start[cj],
                                  solver.cluster_size[ci], solver.cluster_size[cj]) =
                        yhat.block(solver.cluster_start[ci], solver.cluster_start[cj],
                                   solver.cluster_size[ci], solver.cluster_size[cj]);
        if (ystruct.cwiseAbs().maxCoeff() == 0.0) continue;
        prod = multiply(prod, exp_term_to(ystruct, k, n * k));
    }
    return conjugate_coefficients(p, prod, pinv);
}

AlignedForm triangularize(const AlignedForm& af) {
    const JordanData& jd = af.jordan;
    int nc = static_cast<int>(jd.cluster_values.size());
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        double ax = std::abs(jd.cluster_values[x]), ay = std::abs(jd.cluster_values[y]);
        if (ax != ay) return ax < ay;
        return std::arg(jd.cluster_values[x]) < std::arg(jd.cluster_values[y]);
    });
    AlignedForm out = af;
    JordanData& njd = out.jordan;
    njd.cluster_values.clear();
    njd.cluster_mult.clear();
    njd.column_cluster.clear();
    int n = jd.size();
    njd.P = Matrix(n, n);
    std::vector<int> old_start(nc, 0);
    {
        int pos = 0;
        for (int c = 0; c < nc; ++c) {
            old_start[c] = pos;
            pos += jd.cluster_mult[c];
        }
    }
    int col = 0;
    for (int oc = 0; oc < nc; ++oc) {
        int c = order[oc];
        njd.cluster_values.push_back(jd.cluster_values[c]);
        njd.cluster_mult.push_back(jd.cluster_mult[c]);
        for (int i = 0; i < jd.cluster_mult[c]; ++i) {
            njd.P.col(col) = jd.P.col(old_start[c] + i);
            njd.column_cluster.push_back(oc);
            ++col;
        }
    }
    return out;
}

}  // namespace qloop
