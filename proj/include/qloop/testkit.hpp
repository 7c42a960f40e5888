#pragma once

#include <string>
#include <vector>

#include "qloop/invariant.hpp"
#include "qloop/rng.hpp"

namespace qloop {

/// Deterministic generator parameters: equal specs produce identical outputs.
struct GeneratorSpec {
    uint64_t seed = 1;
    int n = 2;
    int deg = 2;
    double coeff_bound = 1.0;
    /// tau-exponents available for planting Gamma points (denominators kept
    /// small so recognition is never borderline)
    std::vector<std::pair<int, int>> resonance_menu = {
        {0, 1}, {1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {1, 6}, {5, 12}};
};

/// Element of G[z] with an invertible near-identity constant term.
LaurentMatrix random_polynomial_loop(const GeneratorSpec& spec);

/// Invariant with 1 <= rank <= max_rank, points drawn from the menu.
EllipticInvariant random_invariant(const GeneratorSpec& spec, int max_rank,
                                   const ModulusConfig& cfg);

/// Reduced constant with a known Jordan structure; *centralizer_dim receives
/// the centralizer dimension implied by the construction.
Matrix random_reduced_constant(const GeneratorSpec& spec, const ModulusConfig& cfg,
                               int* centralizer_dim = nullptr);

/// Expanded aligned polynomial with planted q-power resonances; out_form
/// receives the planted data when non-null.
LaurentMatrix random_aligned_loop(const GeneratorSpec& spec, const ModulusConfig& cfg,
                                  const ToleranceConfig& tol,
                                  AlignedForm* out_form = nullptr);

struct ClassPair {
    LaurentMatrix a;
    LaurentMatrix b;
    bool expected_equivalent = false;
    std::string how;
};

/// Ground-truth pair: equivalent ones are built by twisted conjugation (or a
/// q^Z lattice shift), inequivalent ones by synthesis from distinct invariants.
ClassPair random_integral_class_pair(const GeneratorSpec& spec,
                                     const ModulusConfig& cfg);

struct SelftestReport {
    std::string jsonl;  ///< one record per trial
    int failures = 0;
};

SelftestReport run_selftest(uint64_t seed, int trials, const ModulusConfig& cfg,
                            const ToleranceConfig& tol);

}  // namespace qloop
