#pragma once

#include <vector>

#include "qloop/laurent.hpp"
#include "qloop/spectral.hpp"

namespace qloop {

/// Finite normal form a0 exp(x_1 z) ... exp(x_K z^K) with x_i in the q^i
/// weight space of Ad(a0^ss). The expanded product is an exact matrix
/// polynomial because each x_i is nilpotent.
struct AlignedForm {
    Matrix a0;
    JordanData jordan;        ///< of a0
    std::vector<Matrix> xs;   ///< x_1 .. x_K, ambient basis, possibly zero
    int K = 0;
};

/// Verifies membership in GL_n[[z]] (no negative exponents, invertible
/// constant term, integral covering) and returns the loop normalized to a
/// power-series window. Throws NotIntegralRepresentative otherwise; deciding
/// whether some other representative of the class is integral is not
/// attempted.
LaurentMatrix check_integral(const LaurentMatrix& a, const ToleranceConfig& tol = {});

/// The exact polynomial a0 exp(x_1 z) ... exp(x_K z^K).
LaurentMatrix expand_aligned(const AlignedForm& af, const ModulusConfig& cfg,
                             const ToleranceConfig& tol = {});

struct AlignResult {
    AlignedForm form;
    LaurentMatrix conjugator;  ///< twisted_conjugate(conjugator, a) = expansion
};

/// The alignment iteration: step k removes every weight component of the z^k
/// coefficient except the resonant one, by twisted conjugation with
/// exp(x_k z^k). The aligned data is fixed after K steps; the iteration
/// continues to the window order so the conjugator reproduces the aligned
/// polynomial on the whole input window.
AlignResult align(const LaurentMatrix& a, const ModulusConfig& cfg,
                  const ToleranceConfig& tol = {});

/// Canonical basis order: weakly increasing |lambda| (ties by argument), so
/// a0 is block upper triangular and every x_i sits strictly above the block
/// diagonal. align already produces this order; idempotent.
AlignedForm triangularize(const AlignedForm& af);

}  // namespace qloop
