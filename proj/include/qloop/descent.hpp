#pragma once

#include <vector>

#include "qloop/align.hpp"
#include "qloop/resonance.hpp"

namespace qloop {

/// Output of the covering descent: conjugating an aligned loop by
/// phi(z^{1/m})^{-1} lands on the reduced constant c; theta_a = phi(e^{2pi i/m})
/// is the finite-order a-cycle monodromy, c the b-cycle monodromy.
struct DescentData {
    long long m = 1;
    std::vector<long long> phi;     ///< cocharacter exponents per eigenbasis column
    Matrix basis;                   ///< the eigenbasis carrying phi
    Matrix c;                       ///< reduced constant multiplier
    Matrix theta_a;                 ///< theta_a^m = I, [theta_a, c] = 0
    std::vector<Complex> s_red_eigs;
    LaurentMatrix conjugator;       ///< g with twisted_conjugate(g, aligned) = c
};

/// rd must come from resonance_analyze on the per-column eigenvalues of
/// af.jordan. Verifies the conjugation witness on every call.
DescentData descend(const AlignedForm& af, const ResonanceData& rd,
                    const ModulusConfig& cfg, const ToleranceConfig& tol = {});

/// The constant theta = (galois_shift g) g^{-1}; checks constancy and
/// theta^m = I.
Matrix galois_cocycle(const LaurentMatrix& g, int m, const ToleranceConfig& tol = {});

}  // namespace qloop
