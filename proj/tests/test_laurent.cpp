#include <doctest.h>

#include "qloop/laurent.hpp"
#include "qloop/rng.hpp"
#include "qloop/testkit.hpp"

#include "helpers.hpp"

using namespace qloop;
using namespace qloop::test;

TEST_CASE("multiply basics") {
    LaurentMatrix a(2, 2, 1, Window{0, 5});
    a.set_coeff(0, m2(1, 2, 3, 4));
    a.set_coeff(2, m2(0, 1, 1, 0));
    LaurentMatrix i2 = LaurentMatrix::identity(2);

    SUBCASE("identity keeps the window") {
        LaurentMatrix p = multiply(i2, a);
        CHECK(p.window().lo == 0);
        CHECK(p.window().hi == 5);
        CHECK(max_difference(p, a) == doctest::Approx(0.0));
    }
    SUBCASE("monomial cancellation intersects windows") {
        LaurentMatrix z = LaurentMatrix::monomial(2, 1, 1).with_window(Window{1, 1});
        LaurentMatrix zinv = LaurentMatrix::monomial(2, -1, 1).with_window(Window{-1, -1});
        LaurentMatrix p = multiply(z, zinv);
        CHECK(p.window().lo == 0);
        CHECK(p.window().hi == 0);
        CHECK((p.coeff(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("shear times opposite shear is the identity") {
        // [[1, z],[0, 1]] [[1, -z],[0, 1]]: the z-terms cancel in the convolution
        LaurentMatrix s = linear2(Matrix::Identity(2, 2), m2(0, 1, 0, 0));
        LaurentMatrix t = linear2(Matrix::Identity(2, 2), m2(0, -1, 0, 0));
        LaurentMatrix p = multiply(s, t);
        CHECK(p.window().exact());
        CHECK(max_difference(p, LaurentMatrix::identity(2)) == doctest::Approx(0.0));
    }
}

TEST_CASE("invert") {
    SUBCASE("identity") {
        CHECK(max_difference(invert(LaurentMatrix::identity(3)),
                             LaurentMatrix::identity(3)) == doctest::Approx(0.0));
    }
    SUBCASE("diagonal monomial") {
        LaurentMatrix d = LaurentMatrix::monomial_diag({1, 0}, 1);
        LaurentMatrix di = invert(d);
        CHECK(di.coeff(-1)(0, 0) == Complex(1, 0));
        CHECK(di.coeff(0)(1, 1) == Complex(1, 0));
        CHECK(max_difference(multiply(d, di), LaurentMatrix::identity(2)) <
              1e-14);
    }
    SUBCASE("unipotent shear: the geometric series terminates") {
        LaurentMatrix s = linear2(Matrix::Identity(2, 2), m2(0, 1, 0, 0));
        LaurentMatrix si = invert(s);
        CHECK(si.window().exact());
        CHECK((si.coeff(1) - m2(0, -1, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("singular leading term") {
        LaurentMatrix a(1, 1, 1, Window{0, 4});
        CHECK_THROWS_WITH_AS(invert(a), doctest::Contains("NonInvertibleLeadingTerm"),
                             Error);
    }
    SUBCASE("no row normalization works but det is nonzero") {
        // [[1, 1],[z, z + z^2]]: det = z^2
        LaurentMatrix a(2, 2, 1, Window{0, kExactWindow});
        a.set_coeff(0, m2(1, 1, 0, 0));
        a.set_coeff(1, m2(0, 0, 1, 1));
        a.set_coeff(2, m2(0, 0, 0, 1));
        LaurentMatrix ai = invert(a);
        LaurentMatrix p = multiply(a, ai);
        CHECK(max_difference(p, rescale_covering(LaurentMatrix::identity(2),
                                                 p.covering())) < 1e-12);
    }
    SUBCASE("genuinely singular matrix") {
        LaurentMatrix a(2, 2, 1, Window{0, kExactWindow});
        a.set_coeff(0, m2(1, 1, 1, 1));
        CHECK_THROWS_AS(invert(a), Error);
    }
    SUBCASE("two-sided inverse on random polynomial loops") {
        for (uint64_t seed = 1; seed <= 8; ++seed) {
            GeneratorSpec spec;
            spec.seed = seed;
            spec.n = 1 + static_cast<int>(seed % 3);
            spec.deg = 2;
            LaurentMatrix g = random_polynomial_loop(spec);
            LaurentMatrix gi = invert(g);
            LaurentMatrix id = LaurentMatrix::identity(g.size());
            CHECK(max_difference(multiply(g, gi), id) < 1e-10);
            CHECK(max_difference(multiply(gi, g), id) < 1e-10);
        }
    }
}

TEST_CASE("q_shift and galois_shift") {
    ModulusConfig cfg = default_modulus();
    SUBCASE("constants are fixed") {
        LaurentMatrix c = LaurentMatrix::constant(m2(1, 2, 3, 4));
        CHECK(max_difference(q_shift(c, cfg), c) == doctest::Approx(0.0));
        CHECK(max_difference(galois_shift(c), c) == doctest::Approx(0.0));
    }
    SUBCASE("z I picks up q") {
        LaurentMatrix z = LaurentMatrix::monomial(1, 1, 1);
        CHECK(std::abs(q_shift(z, cfg).coeff(1)(0, 0) - cfg.q()) < 1e-15);
    }
    SUBCASE("half-integer power picks up e^{pi i tau}") {
        LaurentMatrix zh = LaurentMatrix::monomial(1, 1, 2);
        CHECK(std::abs(q_shift(zh, cfg).coeff(1)(0, 0) - cfg.q_power(1, 2)) < 1e-15);
        CHECK(std::abs(galois_shift(zh).coeff(1)(0, 0) - Complex(-1, 0)) < 1e-15);
    }
    SUBCASE("galois generator has order m and commutes with q_shift") {
        LaurentMatrix zt = LaurentMatrix::monomial(1, 1, 3);
        LaurentMatrix w = zt;
        for (int i = 0; i < 3; ++i) w = galois_shift(w);
        CHECK(max_difference(w, zt) < 1e-15);
        GeneratorSpec spec;
        spec.seed = 5;
        spec.n = 2;
        LaurentMatrix g = rescale_covering(random_polynomial_loop(spec), 4);
        CHECK(max_difference(q_shift(galois_shift(g), cfg),
                             galois_shift(q_shift(g, cfg))) < 1e-12);
    }
}

TEST_CASE("twisted conjugation") {
    ModulusConfig cfg = default_modulus();
    SUBCASE("identity conjugator") {
        LaurentMatrix a = linear2(m2(1, 0, 0, 2), m2(0.5, 0, 1, 0));
        CHECK(max_difference(twisted_conjugate(LaurentMatrix::identity(2), a, cfg), a) <
              1e-13);
    }
    SUBCASE("rank one monomial: c goes to q c") {
        LaurentMatrix g = LaurentMatrix::monomial(1, 1, 1);
        LaurentMatrix a = LaurentMatrix::constant(m1(Complex(0.7, 0.1)));
        LaurentMatrix r = twisted_conjugate(g, a, cfg);
        CHECK(std::abs(r.coeff(0)(0, 0) - cfg.q() * Complex(0.7, 0.1)) < 1e-15);
    }
    SUBCASE("diag(1, z^{-1}) merges the ladder diag(lambda, q lambda)") {
        Complex lam = generic_lambda();
        LaurentMatrix g = LaurentMatrix::monomial_diag({0, -1}, 1);
        LaurentMatrix a = LaurentMatrix::constant(diag2(lam, cfg.q() * lam));
        LaurentMatrix r = twisted_conjugate(g, a, cfg);
        CHECK(is_constant(r, 1e-13));
        CHECK((r.coeff(0) - diag2(lam, lam)).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("cocycle property on random polynomial loops") {
        for (uint64_t seed = 11; seed <= 14; ++seed) {
            GeneratorSpec spec;
            spec.seed = seed;
            spec.n = 2;
            spec.deg = 2;
            spec.coeff_bound = 0.6;
            LaurentMatrix g1 = random_polynomial_loop(spec);
            spec.seed = seed + 100;
            LaurentMatrix g2 = random_polynomial_loop(spec);
            spec.seed = seed + 200;
            LaurentMatrix a = random_polynomial_loop(spec);
            LaurentMatrix lhs = twisted_conjugate(g2, twisted_conjugate(g1, a, cfg), cfg);
            LaurentMatrix rhs = twisted_conjugate(multiply(g2, g1), a, cfg);
            CHECK(max_difference(lhs.with_window(Window{0, 6}),
                                 rhs.with_window(Window{0, 6})) < 1e-9);
        }
    }
}

TEST_CASE("exp and log series") {
    SUBCASE("exp of zero") {
        LaurentMatrix zero(2, 2, 1, Window{0, kExactWindow});
        LaurentMatrix e = exp_series(zero);
        CHECK(max_difference(e, LaurentMatrix::identity(2)) == doctest::Approx(0.0));
    }
    SUBCASE("nilpotent exponential terminates") {
        LaurentMatrix x(2, 2, 1, Window{0, kExactWindow});
        x.set_coeff(1, m2(0, 3, 0, 0));
        LaurentMatrix e = exp_series(x);
        CHECK(e.window().exact());
        CHECK((e.coeff(1) - m2(0, 3, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(e.coeff(2).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("log of a unipotent shear") {
        LaurentMatrix a = linear2(Matrix::Identity(2, 2), m2(0, 1, 0, 0));
        LaurentMatrix l = log_series(a);
        CHECK((l.coeff(1) - m2(0, 1, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(l.coeff(2).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("log inverts exp where defined") {
        XorShift64Star rng(3);
        LaurentMatrix x(3, 3, 1, Window{0, 9});
        for (int k = 1; k <= 3; ++k) {
            Matrix m(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m(i, j) = Complex(rng.symmetric(0.4), rng.symmetric(0.4));
            x.set_coeff(k, m);
        }
        LaurentMatrix back = log_series(exp_series(x));
        CHECK(max_difference(back.with_window(Window{0, 9}), x) < 1e-10);
    }
    SUBCASE("valuation errors") {
        LaurentMatrix x = LaurentMatrix::constant(m2(1, 0, 0, 1));
        CHECK_THROWS_AS(exp_series(x), Error);
        LaurentMatrix a = LaurentMatrix::constant(m2(2, 0, 0, 1));
        CHECK_THROWS_AS(log_series(a), Error);
    }
}

TEST_CASE("covering rescale round trip") {
    GeneratorSpec spec;
    spec.seed = 9;
    spec.n = 2;
    LaurentMatrix a = random_polynomial_loop(spec);
    LaurentMatrix b = rescale_covering(a, 6);
    CHECK(b.covering() == 6);
    LaurentMatrix c = reduce_covering(b);
    CHECK(c.covering() == 1);
    CHECK(max_difference(c, a) == doctest::Approx(0.0));
}

TEST_CASE("determinant series") {
    LaurentMatrix a = LaurentMatrix::monomial_diag({1, -1}, 1);
    LaurentMatrix d = det_series(a);
    CHECK(d.size() == 1);
    CHECK(std::abs(d.coeff(0)(0, 0) - Complex(1, 0)) < 1e-15);
}
