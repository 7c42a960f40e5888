#include <doctest.h>

#include "qloop/rng.hpp"
#include "qloop/spectral.hpp"
#include "qloop/invariant.hpp"

#include "helpers.hpp"

using namespace qloop;
using namespace qloop::test;

TEST_CASE("jordan decomposition") {
    SUBCASE("already unipotent") {
        JordanData jd = jordan_decomposition(m2(1, 1, 0, 1));
        CHECK((jd.S - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((jd.U - m2(1, 1, 0, 1)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(jd.cluster_values.size() == 1);
    }
    SUBCASE("already semisimple") {
        Matrix a = diag2(2, 3);
        JordanData jd = jordan_decomposition(a);
        CHECK((jd.S - a).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((jd.U - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(jd.cluster_values.size() == 2);
    }
    SUBCASE("shifted Jordan block") {
        Matrix a = m2(2, 1, 0, 2);
        JordanData jd = jordan_decomposition(a);
        CHECK((jd.S - diag2(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((jd.S * jd.U - a).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((jd.S * jd.U - jd.U * jd.S).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((jd.U - m2(1, 0.5, 0, 1)).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("random structured matrices reconstruct") {
        XorShift64Star rng(21);
        for (int trial = 0; trial < 12; ++trial) {
            int n = 2 + static_cast<int>(rng.below(3));
            Matrix d = Matrix::Zero(n, n);
            int pos = 0;
            while (pos < n) {
                int sz = 1 + static_cast<int>(rng.below(std::min(n - pos, 2)));
                Complex val = std::exp(Complex(rng.symmetric(0.5), 0)) *
                              std::exp(Complex(0, 2 * kPi * rng.uniform()));
                d.block(pos, pos, sz, sz) = val * unipotent_block(sz);
                pos += sz;
            }
            Matrix p(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    p(i, j) = Complex(rng.symmetric(1.0), rng.symmetric(1.0));
            p += 3.0 * Matrix::Identity(n, n);
            Matrix a = p * d * p.fullPivLu().inverse();
            JordanData jd = jordan_decomposition(a);
            CHECK((jd.S * jd.U - a).cwiseAbs().maxCoeff() < 1e-8);
            CHECK((jd.S * jd.U - jd.U * jd.S).cwiseAbs().maxCoeff() < 1e-8);
            Matrix nil = jd.U - Matrix::Identity(n, n);
            Matrix power = Matrix::Identity(n, n);
            for (int i = 0; i < n; ++i) power = power * nil;
            CHECK(power.cwiseAbs().maxCoeff() < 1e-7);
        }
    }
    SUBCASE("singular input is rejected") {
        CHECK_THROWS_AS(jordan_decomposition(m2(1, 1, 1, 1)), Error);
    }
}

TEST_CASE("weight decomposition") {
    ModulusConfig cfg = default_modulus();
    Complex q = cfg.q();
    Complex lam = generic_lambda();
    SUBCASE("identity has no resonances") {
        WeightData wd = weight_decomposition(jordan_decomposition(Matrix::Identity(3, 3) * 2.0), cfg);
        CHECK(wd.K == 0);
        CHECK(wd.resonant_exponents.empty());
    }
    SUBCASE("q-ladder gives K = 1") {
        WeightData wd = weight_decomposition(jordan_decomposition(diag2(lam, q * lam)), cfg);
        CHECK(wd.K == 1);
        REQUIRE(wd.resonant_exponents.size() == 1);
        CHECK(wd.resonant_exponents[0] == 1);
    }
    SUBCASE("q^2-ladder gives K = 2 only") {
        WeightData wd = weight_decomposition(jordan_decomposition(diag2(lam, q * q * lam)), cfg);
        CHECK(wd.K == 2);
        REQUIRE(wd.resonant_exponents.size() == 1);
        CHECK(wd.resonant_exponents[0] == 2);
    }
}

TEST_CASE("joint block decomposition") {
    SUBCASE("trivial theta carries the Jordan type") {
        auto joints = joint_block_decomposition(Matrix::Identity(2, 2), m2(1, 1, 0, 1));
        REQUIRE(joints.size() == 1);
        REQUIRE(joints[0].blocks.size() == 1);
        CHECK(joints[0].blocks[0].size == 2);
        CHECK(std::abs(joints[0].blocks[0].eigenvalue - Complex(1, 0)) < 1e-9);
    }
    SUBCASE("simultaneous diagonal") {
        auto joints = joint_block_decomposition(diag2(1, -1), diag2(5, 7));
        REQUIRE(joints.size() == 2);
        for (const auto& jb : joints) {
            REQUIRE(jb.blocks.size() == 1);
            CHECK(jb.blocks[0].size == 1);
            if (std::abs(jb.theta_eigenvalue - Complex(1, 0)) < 1e-9)
                CHECK(std::abs(jb.blocks[0].eigenvalue - Complex(5, 0)) < 1e-9);
            else
                CHECK(std::abs(jb.blocks[0].eigenvalue - Complex(7, 0)) < 1e-9);
        }
    }
    SUBCASE("one by one") {
        auto joints = joint_block_decomposition(m1(-1), m1(1));
        REQUIRE(joints.size() == 1);
        CHECK(joints[0].blocks[0].size == 1);
    }
    SUBCASE("block sizes always sum to n") {
        XorShift64Star rng(77);
        for (int trial = 0; trial < 8; ++trial) {
            int n = 2 + static_cast<int>(rng.below(3));
            // theta = diag of 4th roots of unity, c block diagonal commuting
            Matrix theta = Matrix::Zero(n, n), c = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                theta(i, i) = ModulusConfig::unit_root(rng.below(2), 2);
                c(i, i) = Complex(1.0 + rng.uniform(), rng.symmetric(0.5));
            }
            auto joints = joint_block_decomposition(theta, c);
            int total = 0;
            for (const auto& jb : joints)
                for (const auto& b : jb.blocks) total += b.size;
            CHECK(total == n);
        }
    }
    SUBCASE("non-commuting pair is rejected") {
        CHECK_THROWS_AS(joint_block_decomposition(diag2(1, -1), m2(1, 1, 0, 1)), Error);
    }
}

TEST_CASE("jordan type and centralizer dimension") {
    CHECK(centralizer_dimension(Matrix::Identity(3, 3)) == 9);
    CHECK(centralizer_dimension(diag2(2, 3)) == 2);
    CHECK(centralizer_dimension(m2(1, 1, 0, 1)) == 2);
    auto blocks = jordan_type(kronecker(unipotent_block(2), unipotent_block(2)));
    REQUIRE(blocks.size() == 2);
    std::vector<int> sizes{blocks[0].size, blocks[1].size};
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes[0] == 1);
    CHECK(sizes[1] == 3);
}
