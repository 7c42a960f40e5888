#include "qloop/intertwiner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qloop/rng.hpp"

namespace qloop {

namespace {

void require_polynomial(const LaurentMatrix& a, const char* who) {
    if (a.covering() != 1)
        fail("BadInput", std::string(who) + ": oracle inputs must live over z");
    if (!a.window().exact())
        fail("BadInput",
             std::string(who) + ": oracle inputs must be exact Laurent polynomials");
}

std::vector<Complex> constant_spectrum(const LaurentMatrix& a) {
    Matrix a0 = a.coeff(0);
    Eigen::ComplexEigenSolver<Matrix> es(a0, false);
    std::vector<Complex> out(a0.rows());
    for (int i = 0; i < a0.rows(); ++i) out[i] = es.eigenvalues()(i);
    return out;
}

}  // namespace

Window support_bound(const LaurentMatrix& a, const LaurentMatrix& a2,
                     const ModulusConfig& cfg, const ToleranceConfig& tol) {
    require_polynomial(a, "support_bound");
    require_polynomial(a2, "support_bound");
    std::vector<Complex> src = constant_spectrum(a);
    std::vector<Complex> dst = constant_spectrum(a2);
    double logq = std::log(std::abs(cfg.q()));
    std::set<long long> cands;
    for (const Complex& lam : src) {
        for (const Complex& mu : dst) {
            if (!(std::abs(lam) > 0) || !(std::abs(mu) > 0)) continue;
            // q^k lam = mu forces k = log(|mu|/|lam|)/log|q| to be an integer
            double k_real = std::log(std::abs(mu) / std::abs(lam)) / logq;
            long long k = std::llround(k_real);
            if (std::abs(k_real - static_cast<double>(k)) <= 0.45 &&
                std::llabs(k) <= tol.l_max)
                cands.insert(k);
        }
    }
    int spread = std::max({0, a.max_exponent(), a2.max_exponent()});
    if (cands.empty()) return Window{0, 0};
    int lo = static_cast<int>(*cands.begin()) - spread;
    int hi = static_cast<int>(*cands.rbegin()) + spread;
    return Window{lo, hi};
}

SolutionSpace solve_intertwiners(const LaurentMatrix& a, const LaurentMatrix& a2,
                                 Window window, const ModulusConfig& cfg,
                                 const ToleranceConfig& tol) {
    require_polynomial(a, "solve_intertwiners");
    require_polynomial(a2, "solve_intertwiners");
    if (window.exact())
        fail("BadInput", "solve_intertwiners needs a finite support window");
    int n1 = a.size(), n2 = a2.size();
    int klo = window.lo, khi = window.hi;
    int nk = khi - klo + 1;
    int nu = nk * n2 * n1;

    int e_lo = std::min({0, a.has_terms() ? a.terms().begin()->first : 0,
                         a2.has_terms() ? a2.terms().begin()->first : 0});
    int e_hi = std::max({0, a.max_exponent(), a2.max_exponent()});
    int jlo = klo + e_lo, jhi = khi + e_hi;
    int nj = jhi - jlo + 1;

    auto col_of = [&](int k, int r, int c) {
        return (k - klo) * n2 * n1 + c * n2 + r;
    };
    auto row_of = [&](int j, int r, int c) {
        return (j - jlo) * n2 * n1 + c * n2 + r;
    };

    Matrix sys = Matrix::Zero(nj * n2 * n1, nu);
    for (int k = klo; k <= khi; ++k) {
        Complex qk = cfg.q_power(k);
        // q^k g(k) a_{j-k}
        for (const auto& [ka, ma] : a.terms()) {
            int j = k + ka;
            if (j < jlo || j > jhi) continue;
            for (int r = 0; r < n2; ++r)
                for (int c = 0; c < n1; ++c)
                    for (int s = 0; s < n1; ++s)
                        sys(row_of(j, r, c), col_of(k, r, s)) += qk * ma(s, c);
        }
        // - a2_{j-k} g(k)
        for (const auto& [kb, mb] : a2.terms()) {
            int j = k + kb;
            if (j < jlo || j > jhi) continue;
            for (int r = 0; r < n2; ++r)
                for (int c = 0; c < n1; ++c)
                    for (int s = 0; s < n2; ++s)
                        sys(row_of(j, r, c), col_of(k, s, c)) -= mb(r, s);
        }
    }

    Eigen::JacobiSVD<Matrix> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(0) > 0 && sv(i) > tol.eps_eig * sv(0)) ++rank;

    SolutionSpace out;
    out.window = window;
    out.dim = nu - rank;
    for (int b = 0; b < out.dim; ++b) {
        Eigen::VectorXcd v = svd.matrixV().col(nu - 1 - b);
        LaurentMatrix g(n2, n1, 1, Window{std::min(klo, 0), kExactWindow});
        for (int k = klo; k <= khi; ++k) {
            Matrix m(n2, n1);
            for (int r = 0; r < n2; ++r)
                for (int c = 0; c < n1; ++c) m(r, c) = v(col_of(k, r, c));
            if (m.cwiseAbs().maxCoeff() > 0.0) g.set_coeff(k, m);
        }
        out.basis.push_back(std::move(g));
    }
    return out;
}

int hom_dimension_measured(const LaurentMatrix& a, const LaurentMatrix& a2,
                           const ModulusConfig& cfg, const ToleranceConfig& tol) {
    return solve_intertwiners(a, a2, support_bound(a, a2, cfg, tol), cfg, tol).dim;
}

std::optional<LaurentMatrix> certificate_conjugator(const LaurentMatrix& a,
                                                    const LaurentMatrix& a2,
                                                    const ModulusConfig& cfg,
                                                    const ToleranceConfig& tol,
                                                    uint64_t seed, int trials) {
    if (a.size() != a2.size())
        fail("SizeMismatch", "certificate: loops have different rank");
    SolutionSpace space =
        solve_intertwiners(a, a2, support_bound(a, a2, cfg, tol), cfg, tol);
    if (space.dim == 0) return std::nullopt;

    double input_scale = std::max({1.0, a.max_norm(), a2.max_norm()});
    auto try_candidate = [&](const LaurentMatrix& g) -> bool {
        LaurentMatrix det = det_series(g);
        if (det.max_norm() <= tol.eps_eig * std::max(1.0, std::pow(g.max_norm(), g.size())))
            return false;
        try {
            LaurentMatrix conj = twisted_conjugate(g, a, cfg, tol);
            return max_difference(conj, a2) <= 1e2 * tol.eps_eig * input_scale;
        } catch (const Error&) {
            return false;
        }
    };

    for (const auto& g : space.basis)
        if (try_candidate(g)) return g;

    XorShift64Star rng(seed);
    for (int t = 0; t < trials; ++t) {
        LaurentMatrix combo = scale(space.basis[0], Complex(rng.symmetric(1.0),
                                                            rng.symmetric(1.0)));
        for (int b = 1; b < space.dim; ++b)
            combo = add(combo, scale(space.basis[b],
                                     Complex(rng.symmetric(1.0), rng.symmetric(1.0))));
        if (try_candidate(combo)) return combo;
    }
    return std::nullopt;
}

}  // namespace qloop
