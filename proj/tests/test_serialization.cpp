#include <doctest.h>

#include "qloop/api.hpp"
#include "qloop/testkit.hpp"

#include "helpers.hpp"

using namespace qloop;
using namespace qloop::test;

namespace {
ModulusConfig cfg = default_modulus();
}  // namespace

TEST_CASE("loop documents round trip byte for byte") {
    GeneratorSpec spec;
    spec.seed = 19;
    spec.n = 2;
    spec.deg = 2;
    LaurentMatrix a = random_polynomial_loop(spec);
    std::string doc = loop_to_json(a, &cfg);
    LaurentMatrix back = loop_from_json(doc);
    CHECK(max_difference(a, back) == doctest::Approx(0.0));
    CHECK(back.window().exact());
    CHECK(loop_to_json(back, &cfg) == doc);
}

TEST_CASE("invariant documents round trip and stay sorted") {
    EllipticInvariant inv;
    inv.entries = {{EPoint{0.75, 0.25}, 1}, {EPoint{0.25, 0.5}, 2}};
    std::string doc = invariant_to_json(inv, cfg);
    EllipticInvariant back = invariant_from_json(doc);
    CHECK(invariants_equal(inv, back, 1e-15));
    CHECK(invariant_to_json(back, cfg) == doc);
    CHECK(doc.find("\"rank\":3") != std::string::npos);
    CHECK(doc.find("\"det_point\"") != std::string::npos);
    // entries sorted lexicographically: the 0.25 point first
    CHECK(doc.find("0.25") < doc.find("0.75"));
}

TEST_CASE("floats are printed with 17 significant digits") {
    EllipticInvariant inv;
    inv.entries = {{EPoint{0.1, 0.0}, 1}};
    std::string doc = invariant_to_json(inv, cfg);
    CHECK(doc.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_WITH_AS(loop_from_json("not json"), doctest::Contains("BadDocument"),
                         Error);
    CHECK_THROWS_AS(loop_from_json("{\"n\":1,\"m_cov\":1,\"window\":[2,0],\"terms\":[]}"),
                    Error);
    // term outside the window
    CHECK_THROWS_AS(
        loop_from_json("{\"n\":1,\"m_cov\":1,\"window\":[0,1],\"terms\":"
                       "[{\"k\":5,\"matrix\":[[[1,0]]]}]}"),
        Error);
    // wrong matrix shape
    CHECK_THROWS_AS(
        loop_from_json("{\"n\":2,\"m_cov\":1,\"window\":[0,1],\"terms\":"
                       "[{\"k\":0,\"matrix\":[[[1,0]]]}]}"),
        Error);
    CHECK_THROWS_AS(invariant_from_json("{\"rank\":2,\"entries\":"
                                        "[{\"t_tau\":0,\"t_one\":0,\"size\":1}]}"),
                    Error);
}

TEST_CASE("exact eigenvalue lists parse") {
    auto eigs = exact_eigenvalues_from_json(
        "[{\"r\":\"1/2\",\"r1\":\"0\",\"tag\":null},"
        "{\"r\":\"-2/3\",\"r1\":\"1/4\",\"tag\":\"t\"}]");
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].r == Rational(1, 2));
    CHECK(!eigs[0].tag.has_value());
    CHECK(eigs[1].r == Rational(-2, 3));
    CHECK(eigs[1].tag.value() == "t");
    CHECK_THROWS_AS(exact_eigenvalues_from_json("[{\"r\":\"1/0\"}]"), Error);
}

TEST_CASE("api documents are deterministic") {
    JobConfig job;
    job.modulus = cfg;
    std::string inv_doc =
        "{\"rank\":2,\"entries\":[{\"t_tau\":0.5,\"t_one\":0,\"size\":1},"
        "{\"t_tau\":0,\"t_one\":0,\"size\":1}]}";
    std::string first = api_synth(inv_doc, job);
    std::string second = api_synth(inv_doc, job);
    CHECK(first == second);
    CHECK(first.find("\"tau\":[0.29999999999999999,1.1000000000000001]") !=
          std::string::npos);
}
