#include "qloop/descent.hpp"

#include <sstream>

namespace qloop {

namespace {

LaurentMatrix basis_monomial(const Matrix& p, const Matrix& pinv,
                             const std::vector<long long>& exps, int m) {
    // P diag(z^{e_i/m}) P^{-1}
    int n = static_cast<int>(p.rows());
    std::map<long long, Matrix> groups;
    for (int i = 0; i < n; ++i) {
        auto it = groups.find(exps[i]);
        if (it == groups.end()) it = groups.emplace(exps[i], Matrix::Zero(n, n)).first;
        it->second(i, i) = 1.0;
    }
    long long lo = groups.begin()->first;
    LaurentMatrix g(n, n, m, Window{static_cast<int>(std::min<long long>(lo, 0)),
                                    kExactWindow});
    for (const auto& [e, sel] : groups)
        g.set_coeff(static_cast<int>(e), p * sel * pinv);
    return g;
}

}  // namespace

DescentData descend(const AlignedForm& af, const ResonanceData& rd,
                    const ModulusConfig& cfg, const ToleranceConfig& tol) {
    int n = static_cast<int>(af.a0.rows());
    if (static_cast<int>(rd.phi.size()) != n)
        fail("ResonanceMismatch", "resonance data size differs from the loop rank",
             ErrorKind::Verification);
    Matrix p = af.jordan.P;
    Matrix pinv = p.fullPivLu().inverse();
    long long m = rd.m;

    // precondition: every position carrying a nonzero x_k satisfies the exact
    // integer relation phi_i - phi_j = m k, i.e. the ratio was recognized as q^k
    for (int k = 1; k <= af.K; ++k) {
        Matrix yhat = pinv * af.xs[k - 1] * p;
        double thresh = 1e-9 * std::max(1.0, yhat.cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (std::abs(yhat(i, j)) <= thresh) continue;
                if (rd.phi[i] - rd.phi[j] != m * k) {
                    std::ostringstream os;
                    os << "x_" << k << " occupies position (" << i << "," << j
                       << ") but phi_i - phi_j = " << rd.phi[i] - rd.phi[j]
                       << " != m k = " << m * k;
                    fail("ResonanceMismatch", os.str(), ErrorKind::Verification);
                }
            }
    }

    DescentData dd;
    dd.m = m;
    dd.phi.assign(rd.phi.begin(), rd.phi.end());
    dd.basis = p;
    dd.s_red_eigs = rd.s_red_eigs;

    Matrix theta_diag = Matrix::Zero(n, n);
    Matrix qshift_inv_diag = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        theta_diag(i, i) = ModulusConfig::unit_root(rd.phi[i], m);
        qshift_inv_diag(i, i) = cfg.q_power(-rd.phi[i], m);
    }
    dd.theta_a = p * theta_diag * pinv;

    // c = phi(e^{2 pi i tau/m})^{-1} a0^ss u exp(x_1) ... exp(x_K), assembled
    // in the eigenbasis where every factor is exactly available
    Matrix a0hat = pinv * af.a0 * p;
    Matrix chat = qshift_inv_diag * a0hat;
    for (int k = 1; k <= af.K; ++k) {
        Matrix yhat = pinv * af.xs[k - 1] * p;
        Matrix e = Matrix::Identity(n, n);
        Matrix power = Matrix::Identity(n, n);
        double factorial = 1.0;
        for (int j = 1; j <= n; ++j) {
            power = power * yhat;
            factorial *= j;
            if (power.cwiseAbs().maxCoeff() == 0.0) break;
            e += power / factorial;
        }
        chat = chat * e;
    }
    dd.c = p * chat * pinv;

    std::vector<long long> neg(rd.phi.size());
    for (size_t i = 0; i < rd.phi.size(); ++i) neg[i] = -rd.phi[i];
    dd.conjugator = basis_monomial(p, pinv, neg, static_cast<int>(m));

    // witness: the conjugation really lands on the constant c
    LaurentMatrix aligned_poly = expand_aligned(af, cfg, tol);
    LaurentMatrix conj = twisted_conjugate(dd.conjugator, aligned_poly, cfg, tol);
    double scale = std::max({1.0, aligned_poly.max_norm(), dd.c.cwiseAbs().maxCoeff()});
    double eps_wit = tol.eps_eig * scale;
    if (!is_constant(conj, eps_wit))
        fail("VerificationFailed",
             "twisted conjugation by phi(z^{1/m})^{-1} is not constant within "
             "tolerance", ErrorKind::Verification);
    if ((conj.coeff(0) - dd.c).cwiseAbs().maxCoeff() > eps_wit)
        fail("VerificationFailed",
             "conjugated loop differs from the assembled constant multiplier",
             ErrorKind::Verification);

    Matrix theta_m = Matrix::Identity(n, n);
    for (long long j = 0; j < m; ++j) theta_m = theta_m * dd.theta_a;
    if ((theta_m - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > eps_wit)
        fail("VerificationFailed", "theta_a^m differs from the identity",
             ErrorKind::Verification);
    if ((dd.theta_a * dd.c - dd.c * dd.theta_a).cwiseAbs().maxCoeff() > eps_wit)
        fail("VerificationFailed", "theta_a and c do not commute",
             ErrorKind::Verification);

    Eigen::ComplexEigenSolver<Matrix> es(dd.c, false);
    std::vector<Complex> ceigs(n);
    for (int i = 0; i < n; ++i) ceigs[i] = es.eigenvalues()(i);
    if (!is_reduced(ceigs, cfg, tol))
        fail("VerificationFailed", "descended constant is not reduced",
             ErrorKind::Verification);
    return dd;
}

Matrix galois_cocycle(const LaurentMatrix& g, int m, const ToleranceConfig& tol) {
    LaurentMatrix gm = g.covering() == m ? g : rescale_covering(g, lcm_int(g.covering(), m));
    LaurentMatrix theta_ser = multiply(galois_shift(gm), invert(gm, tol));
    double scale = std::max(1.0, theta_ser.max_norm());
    if (!is_constant(theta_ser, tol.eps_eig * scale))
        fail("NotConstantCocycle",
             "(galois_shift g) g^{-1} is not constant on the window",
             ErrorKind::Verification);
    Matrix theta = theta_ser.coeff(0);
    int n = static_cast<int>(theta.rows());
    Matrix theta_m = Matrix::Identity(n, n);
    for (int j = 0; j < m; ++j) theta_m = theta_m * theta;
    if ((theta_m - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() >
        tol.eps_eig * scale * m)
        fail("VerificationFailed", "cocycle is not of order dividing m",
             ErrorKind::Verification);
    return theta;
}

}  // namespace qloop
