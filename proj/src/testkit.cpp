#include "qloop/testkit.hpp"

#include <algorithm>
#include <sstream>

#include "qloop/intertwiner.hpp"
#include "qloop/serialization.hpp"

namespace qloop {

namespace {

Matrix random_matrix(XorShift64Star& rng, int rows, int cols, double bound) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = Complex(rng.symmetric(bound), rng.symmetric(bound));
    return m;
}

Matrix random_unitary(XorShift64Star& rng, int n) {
    Matrix m = random_matrix(rng, n, n, 1.0) + 3.0 * Matrix::Identity(n, n);
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(n, n);
}

std::vector<int> random_composition(XorShift64Star& rng, int total, int max_part) {
    std::vector<int> parts;
    int left = total;
    while (left > 0) {
        int p = 1 + static_cast<int>(rng.below(std::min(left, max_part)));
        parts.push_back(p);
        left -= p;
    }
    return parts;
}

EPoint menu_point(XorShift64Star& rng, const GeneratorSpec& spec) {
    const auto& menu = spec.resonance_menu;
    auto pick = [&]() {
        const auto& [p, q] = menu[rng.below(menu.size())];
        double v = static_cast<double>(p) / q;
        return v - std::floor(v);
    };
    return EPoint{pick(), pick()};
}

}  // namespace

LaurentMatrix random_polynomial_loop(const GeneratorSpec& spec) {
    XorShift64Star rng(spec.seed);
    int n = spec.n;
    LaurentMatrix g(n, n, 1, Window{0, kExactWindow});
    g.set_coeff(0, Matrix::Identity(n, n) +
                       random_matrix(rng, n, n, 0.45 / n));  // strictly diag-dominant
    for (int k = 1; k <= spec.deg; ++k)
        g.set_coeff(k, random_matrix(rng, n, n, spec.coeff_bound));
    return g;
}

EllipticInvariant random_invariant(const GeneratorSpec& spec, int max_rank,
                                   const ModulusConfig& cfg) {
    (void)cfg;
    XorShift64Star rng(spec.seed * 0x9E3779B97F4A7C15ull + 1);
    int rank = 1 + static_cast<int>(rng.below(max_rank));
    EllipticInvariant inv;
    for (int size : random_composition(rng, rank, std::min(rank, 4)))
        inv.entries.push_back({menu_point(rng, spec), size});
    inv.sort_entries();
    return inv;
}

Matrix random_reduced_constant(const GeneratorSpec& spec, const ModulusConfig& cfg,
                               int* centralizer_dim) {
    (void)cfg;
    XorShift64Star rng(spec.seed * 0x9E3779B97F4A7C15ull + 2);
    int n = spec.n;
    std::vector<int> sizes = random_composition(rng, n, std::min(n, 3));
    // generic unit-scale eigenvalues, occasionally repeated across blocks
    std::vector<Complex> values;
    std::vector<int> value_of_block(sizes.size());
    for (size_t b = 0; b < sizes.size(); ++b) {
        if (!values.empty() && rng.below(4) == 0) {
            value_of_block[b] = static_cast<int>(rng.below(values.size()));
            continue;
        }
        for (int attempt = 0; attempt < 64; ++attempt) {
            Complex v = std::exp(Complex(rng.symmetric(0.6), 0)) *
                        std::exp(Complex(0, 2 * kPi * rng.uniform()));
            bool separated = true;
            for (const Complex& w : values)
                if (std::abs(v - w) < 0.05 * std::max(std::abs(v), std::abs(w)))
                    separated = false;
            if (separated) {
                value_of_block[b] = static_cast<int>(values.size());
                values.push_back(v);
                break;
            }
        }
    }
    Matrix d = Matrix::Zero(n, n);
    int pos = 0;
    for (size_t b = 0; b < sizes.size(); ++b) {
        d.block(pos, pos, sizes[b], sizes[b]) =
            values[value_of_block[b]] * unipotent_block(sizes[b]);
        pos += sizes[b];
    }
    Matrix p = random_unitary(rng, n);
    if (centralizer_dim) {
        int dim = 0;
        for (size_t i = 0; i < sizes.size(); ++i)
            for (size_t j = 0; j < sizes.size(); ++j)
                if (value_of_block[i] == value_of_block[j])
                    dim += std::min(sizes[i], sizes[j]);
        *centralizer_dim = dim;
    }
    return p * d * p.adjoint();
}

LaurentMatrix random_aligned_loop(const GeneratorSpec& spec, const ModulusConfig& cfg,
                                  const ToleranceConfig& tol, AlignedForm* out_form) {
    XorShift64Star rng(spec.seed * 0x9E3779B97F4A7C15ull + 3);
    int n = spec.n;
    Complex q = cfg.q();

    // eigenvalue plan: unit-scale generic bases, with q-power ladders planted
    // on top so the weight spaces g_{q^k} are nonempty
    std::vector<int> sizes = random_composition(rng, n, std::min(n, 3));
    std::vector<Complex> values(sizes.size());
    for (size_t b = 0; b < sizes.size(); ++b) {
        bool ladder = b > 0 && rng.below(2) == 0;
        if (ladder) {
            int step = 1 + static_cast<int>(rng.below(2));
            values[b] = values[b - 1] * std::pow(q, step);
        } else {
            values[b] = std::exp(Complex(rng.symmetric(0.5), 0)) *
                        std::exp(Complex(0, 2 * kPi * rng.uniform()));
        }
    }
    Matrix d = Matrix::Zero(n, n);
    int pos = 0;
    for (size_t b = 0; b < sizes.size(); ++b) {
        d.block(pos, pos, sizes[b], sizes[b]) = values[b] * unipotent_block(sizes[b]);
        pos += sizes[b];
    }
    Matrix p = random_unitary(rng, n);
    Matrix a0 = p * d * p.adjoint();

    JordanData jd = jordan_decomposition(a0, tol);
    WeightData wd = weight_decomposition(jd, cfg, tol);
    Matrix pb = jd.P;
    Matrix pbinv = pb.fullPivLu().inverse();

    std::vector<int> cstart(jd.cluster_values.size());
    {
        int at = 0;
        for (size_t c = 0; c < jd.cluster_values.size(); ++c) {
            cstart[c] = at;
            at += jd.cluster_mult[c];
        }
    }
    AlignedForm af;
    af.a0 = a0;
    af.jordan = jd;
    af.K = wd.K;
    for (int k = 1; k <= wd.K; ++k) {
        Matrix yhat = Matrix::Zero(n, n);
        Complex qk = std::pow(q, k);
        for (size_t ci = 0; ci < jd.cluster_values.size(); ++ci)
            for (size_t cj = 0; cj < jd.cluster_values.size(); ++cj) {
                Complex ratio = jd.cluster_values[ci] / jd.cluster_values[cj];
                if (std::abs(ratio - qk) < tol.eps_res * std::abs(qk))
                    yhat.block(cstart[ci], cstart[cj], jd.cluster_mult[ci],
                               jd.cluster_mult[cj]) =
                        random_matrix(rng, jd.cluster_mult[ci], jd.cluster_mult[cj],
                                      spec.coeff_bound);
            }
        af.xs.push_back(pb * yhat * pbinv);
    }
    if (out_form) *out_form = af;
    return expand_aligned(af, cfg, tol);
}

ClassPair random_integral_class_pair(const GeneratorSpec& spec,
                                     const ModulusConfig& cfg) {
    XorShift64Star rng(spec.seed * 0x9E3779B97F4A7C15ull + 4);
    ClassPair out;
    EllipticInvariant inv = random_invariant(spec, spec.n, cfg);
    out.a = synthesize(inv, cfg);
    int n = out.a.size();
    uint64_t kind = rng.below(3);
    if (kind == 0) {
        GeneratorSpec gs = spec;
        gs.seed = rng.next();
        gs.n = n;
        gs.deg = std::min(spec.deg, 3);
        gs.coeff_bound = std::min(spec.coeff_bound, 2.0);
        LaurentMatrix g = random_polynomial_loop(gs);
        ToleranceConfig tol;
        out.b = twisted_conjugate(g, out.a, cfg, tol);
        out.expected_equivalent = true;
        out.how = "twisted conjugate by a random polynomial loop";
    } else if (kind == 1) {
        // same class, written with every diagonal value shifted into another
        // q^Z representative
        Matrix shifted = out.a.coeff(0) * cfg.q();
        out.b = LaurentMatrix::constant(shifted);
        out.expected_equivalent = true;
        out.how = "every value multiplied by q (same points of E)";
    } else {
        GeneratorSpec gs = spec;
        for (int attempt = 1; attempt < 64; ++attempt) {
            gs.seed = spec.seed + 0x51ED2701ull * attempt;
            EllipticInvariant other = random_invariant(gs, spec.n, cfg);
            if (!invariants_equal(inv, other, 1e-9)) {
                out.b = synthesize(other, cfg);
                out.expected_equivalent = false;
                out.how = "synthesized from a distinct invariant";
                return out;
            }
        }
        fail("BadInput", "could not draw a distinct invariant");
    }
    return out;
}

SelftestReport run_selftest(uint64_t seed, int trials, const ModulusConfig& cfg,
                            const ToleranceConfig& tol) {
    SelftestReport rep;
    std::ostringstream out;
    for (int t = 0; t < trials; ++t) {
        GeneratorSpec spec;
        spec.seed = seed + 1000003ull * t;
        spec.n = 1 + t % 4;
        std::string case_name;
        bool pass = false;
        std::string detail;
        try {
            if (t % 3 == 2) {
                case_name = "conjugation-invariance";
                LaurentMatrix a = random_aligned_loop(spec, cfg, tol);
                GeneratorSpec gs = spec;
                gs.seed = spec.seed + 17;
                gs.n = a.size();
                gs.deg = 3;
                gs.coeff_bound = 1.0;
                LaurentMatrix g = random_polynomial_loop(gs);
                LaurentMatrix b = twisted_conjugate(g, a, cfg, tol);
                pass = invariants_equal(classify(a, cfg, tol), classify(b, cfg, tol),
                                        1e-6);
                detail = pass ? "classify unchanged" : "classify changed";
            } else {
                ClassPair pair = random_integral_class_pair(spec, cfg);
                case_name = pair.expected_equivalent ? "pair/equivalent"
                                                     : "pair/inequivalent";
                bool got = equivalent(pair.a, pair.b, cfg, tol);
                pass = got == pair.expected_equivalent;
                detail = pair.how;
            }
        } catch (const Error& e) {
            pass = false;
            detail = e.code() + ": " + e.detail();
            if (case_name.empty()) case_name = "generator";
        }
        if (!pass) ++rep.failures;
        out << "{\"seed\":" << spec.seed << ",\"case\":\"" << case_name
            << "\",\"pass\":" << (pass ? "true" : "false") << ",\"detail\":\""
            << detail << "\"}\n";
    }
    rep.jsonl = out.str();
    return rep;
}

}  // namespace qloop
