#pragma once

#include <optional>
#include <vector>

#include "qloop/laurent.hpp"

namespace qloop {

/// Solutions g of g(qz) a(z) = a2(z) g(z) with support in a fixed window;
/// rectangular (n2 x n1) so Hom between different ranks is covered.
struct SolutionSpace {
    Window window;
    std::vector<LaurentMatrix> basis;
    int dim = 0;
};

/// A window guaranteed to contain the support of every Laurent polynomial
/// solution: exponent k is possible only when q^k lambda = mu is satisfiable
/// on the constant-term spectra, widened by the degree spread on each side.
Window support_bound(const LaurentMatrix& a, const LaurentMatrix& a2,
                     const ModulusConfig& cfg, const ToleranceConfig& tol = {});

/// Exact finite linear system on the windowed coefficients; null space by
/// singular value thresholding. Inputs must be matrix Laurent polynomials in
/// the same covering.
SolutionSpace solve_intertwiners(const LaurentMatrix& a, const LaurentMatrix& a2,
                                 Window window, const ModulusConfig& cfg,
                                 const ToleranceConfig& tol = {});

int hom_dimension_measured(const LaurentMatrix& a, const LaurentMatrix& a2,
                           const ModulusConfig& cfg, const ToleranceConfig& tol = {});

/// Searches the solution space for an invertible element (nonvanishing
/// determinant); any returned loop is verified to conjugate a onto a2.
std::optional<LaurentMatrix> certificate_conjugator(const LaurentMatrix& a,
                                                    const LaurentMatrix& a2,
                                                    const ModulusConfig& cfg,
                                                    const ToleranceConfig& tol = {},
                                                    uint64_t seed = 7,
                                                    int trials = 32);

}  // namespace qloop
