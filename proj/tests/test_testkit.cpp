#include <doctest.h>

#include "qloop/testkit.hpp"

#include "helpers.hpp"

using namespace qloop;
using namespace qloop::test;

namespace {
ModulusConfig cfg = default_modulus();
ToleranceConfig tol;
}  // namespace

TEST_CASE("generators are deterministic") {
    GeneratorSpec spec;
    spec.seed = 42;
    spec.n = 3;
    spec.deg = 2;
    LaurentMatrix a = random_polynomial_loop(spec);
    LaurentMatrix b = random_polynomial_loop(spec);
    CHECK(max_difference(a, b) == doctest::Approx(0.0));
    EllipticInvariant ia = random_invariant(spec, 4, cfg);
    EllipticInvariant ib = random_invariant(spec, 4, cfg);
    CHECK(invariants_equal(ia, ib, 1e-15));
}

TEST_CASE("random polynomial loops have the promised shape") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        GeneratorSpec spec;
        spec.seed = seed;
        spec.n = 2;
        spec.deg = 2;
        LaurentMatrix g = random_polynomial_loop(spec);
        CHECK(g.window().exact());
        CHECK(g.max_exponent() <= 2);
        CHECK(g.min_exponent() >= 0);
        // constant term invertible: the perturbation never reaches 1
        Eigen::JacobiSVD<Matrix> svd(g.coeff(0));
        CHECK(svd.singularValues()(g.size() - 1) > 0.05);
    }
    GeneratorSpec spec;
    spec.seed = 3;
    spec.n = 2;
    spec.deg = 0;
    CHECK(random_polynomial_loop(spec).max_exponent() == 0);
}

TEST_CASE("class pairs carry correct ground truth") {
    for (uint64_t seed = 11; seed <= 22; ++seed) {
        GeneratorSpec spec;
        spec.seed = seed;
        spec.n = 1 + static_cast<int>(seed % 3);
        ClassPair pair = random_integral_class_pair(spec, cfg);
        CHECK(equivalent(pair.a, pair.b, cfg, tol) == pair.expected_equivalent);
    }
}

TEST_CASE("selftest harness reports") {
    SelftestReport rep = run_selftest(7, 9, cfg, tol);
    CHECK(rep.failures == 0);
    int lines = 0;
    for (char c : rep.jsonl)
        if (c == '\n') ++lines;
    CHECK(lines == 9);
    CHECK(rep.jsonl.find("\"pass\":true") != std::string::npos);
}
