#include <doctest.h>

#include "qloop/descent.hpp"
#include "qloop/testkit.hpp"

#include "helpers.hpp"

using namespace qloop;
using namespace qloop::test;

namespace {

ModulusConfig cfg = default_modulus();
ToleranceConfig tol;

DescentData descend_loop(const LaurentMatrix& a) {
    AlignResult ar = align(a, cfg, tol);
    ResonanceData rd =
        resonance_analyze(ar.form.jordan.eigenvalues_by_column(), cfg, tol);
    return descend(ar.form, rd, cfg, tol);
}

}  // namespace

TEST_CASE("descend") {
    SUBCASE("rank one square root of q") {
        DescentData dd = descend_loop(LaurentMatrix::constant(m1(cfg.q_power(1, 2))));
        CHECK(dd.m == 2);
        REQUIRE(dd.phi.size() == 1);
        CHECK(dd.phi[0] == 1);
        CHECK(std::abs(dd.c(0, 0) - Complex(1, 0)) < 1e-12);
        CHECK(std::abs(dd.theta_a(0, 0) - Complex(-1, 0)) < 1e-12);
    }
    SUBCASE("generic constant stays put") {
        Matrix a0 = diag2(generic_lambda(), 0.4);
        DescentData dd = descend_loop(LaurentMatrix::constant(a0));
        CHECK(dd.m == 1);
        CHECK((dd.c - a0).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((dd.theta_a - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("q-ladder merges") {
        Complex lam = generic_lambda();
        DescentData dd =
            descend_loop(LaurentMatrix::constant(diag2(lam, cfg.q() * lam)));
        CHECK(dd.m == 1);
        CHECK((dd.theta_a - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
        Eigen::ComplexEigenSolver<Matrix> es(dd.c, false);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(es.eigenvalues()(i) - lam) < 1e-9);
    }
    SUBCASE("witness and order checks hold on random aligned loops") {
        for (uint64_t seed = 41; seed <= 46; ++seed) {
            GeneratorSpec spec;
            spec.seed = seed;
            spec.n = 2 + static_cast<int>(seed % 3);
            LaurentMatrix a = random_aligned_loop(spec, cfg, tol);
            AlignResult ar = align(a, cfg, tol);
            ResonanceData rd = resonance_analyze(
                ar.form.jordan.eigenvalues_by_column(), cfg, tol);
            DescentData dd = descend(ar.form, rd, cfg, tol);

            int n = a.size();
            Matrix theta_m = Matrix::Identity(n, n);
            for (long long j = 0; j < dd.m; ++j) theta_m = theta_m * dd.theta_a;
            CHECK((theta_m - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((dd.theta_a * dd.c - dd.c * dd.theta_a).cwiseAbs().maxCoeff() <
                  1e-9);

            LaurentMatrix conj =
                twisted_conjugate(dd.conjugator, expand_aligned(ar.form, cfg, tol),
                                  cfg, tol);
            CHECK(is_constant(conj, 1e-9));
            CHECK((conj.coeff(0) - dd.c).cwiseAbs().maxCoeff() < 1e-9);

            Eigen::ComplexEigenSolver<Matrix> es(dd.c, false);
            std::vector<Complex> eigs(n);
            for (int i = 0; i < n; ++i) eigs[i] = es.eigenvalues()(i);
            CHECK(is_reduced(eigs, cfg, tol));
        }
    }
}

TEST_CASE("galois cocycle") {
    SUBCASE("identity") {
        Matrix t = galois_cocycle(LaurentMatrix::identity(2), 4, tol);
        CHECK((t - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("z^{-1/2}") {
        LaurentMatrix g = LaurentMatrix::monomial(1, -1, 2);
        Matrix t = galois_cocycle(g, 2, tol);
        CHECK(std::abs(t(0, 0) - Complex(-1, 0)) < 1e-13);
    }
    SUBCASE("diag(z^{1/3}, 1)") {
        LaurentMatrix g = LaurentMatrix::monomial_diag({1, 0}, 3);
        Matrix t = galois_cocycle(g, 3, tol);
        CHECK(std::abs(t(0, 0) - ModulusConfig::unit_root(1, 3)) < 1e-13);
        CHECK(std::abs(t(1, 1) - Complex(1, 0)) < 1e-13);
    }
    SUBCASE("non-cocycle input is refused") {
        // I + z^{1/2} E12 has a z-dependent Galois quotient
        LaurentMatrix g(2, 2, 2, Window{0, kExactWindow});
        g.set_coeff(0, Matrix::Identity(2, 2));
        g.set_coeff(1, m2(0, 1, 0, 0));
        CHECK_THROWS_WITH_AS(galois_cocycle(g, 2, tol),
                             doctest::Contains("NotConstantCocycle"), Error);
    }
    SUBCASE("descent conjugator cocycle inverts theta_a") {
        DescentData dd = descend_loop(LaurentMatrix::constant(m1(cfg.q_power(1, 3))));
        CHECK(dd.m == 3);
        Matrix t = galois_cocycle(dd.conjugator, 3, tol);
        // the conjugator is phi(z^{1/m})^{-1}, so its cocycle is theta_a^{-1}
        CHECK((t * dd.theta_a - Matrix::Identity(1, 1)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}
