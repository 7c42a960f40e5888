#pragma once

#include <vector>

#include "qloop/descent.hpp"

namespace qloop {

/// Point of E = C*/q^Z in exponent coordinates: the value e^{2 pi i (tau t_tau
/// + t_one)} with both coordinates in [0, 1). Equality on E is coordinatewise
/// circle distance.
struct EPoint {
    double t_tau = 0;
    double t_one = 0;
};

EPoint canonical_point(Complex value, const ModulusConfig& cfg);
Complex point_value(const EPoint& p, const ModulusConfig& cfg);
double torus_distance(const EPoint& a, const EPoint& b);
EPoint point_add(const EPoint& a, const EPoint& b);
EPoint point_negate(const EPoint& a);

struct InvariantEntry {
    EPoint point;
    int size = 1;
};

/// The complete isomorphism invariant: a multiset of (point of E, Jordan
/// size) pairs. Entries are kept sorted for deterministic output.
struct EllipticInvariant {
    std::vector<InvariantEntry> entries;
    int rank() const;
    void sort_entries();
};

bool invariants_equal(const EllipticInvariant& a, const EllipticInvariant& b,
                      double point_tol);

/// Atiyah data of a descent: each joint (theta_a, c) block with
/// theta-eigenvalue e^{2 pi i j/m} and c-Jordan-block (beta, size) contributes
/// the entry (point of beta q^{j/m}, size).
EllipticInvariant atiyah_data(const DescentData& dd, const ModulusConfig& cfg,
                              const ToleranceConfig& tol = {});

/// check_integral -> align -> resonance_analyze -> descend -> atiyah_data.
EllipticInvariant classify(const LaurentMatrix& a, const ModulusConfig& cfg,
                           const ToleranceConfig& tol = {});

bool equivalent(const LaurentMatrix& a, const LaurentMatrix& b,
                const ModulusConfig& cfg, const ToleranceConfig& tol = {});

/// Canonical constant representative: the block diagonal of
/// point_value * J(1, size) over the entries.
LaurentMatrix synthesize(const EllipticInvariant& inv, const ModulusConfig& cfg);

/// Unipotent Jordan block J(1, k).
Matrix unipotent_block(int k);

EllipticInvariant tensor_data(const EllipticInvariant& a, const EllipticInvariant& b);
EllipticInvariant dual_data(const EllipticInvariant& a);
EllipticInvariant sum_data(const EllipticInvariant& a, const EllipticInvariant& b);

/// dim Hom = number of zero-point entries of dual(a) tensor b; the h^0 of a
/// degree-zero indecomposable at the zero point is 1, fixed against the
/// brute-force intertwiner oracle.
int hom_dimension_formula(const EllipticInvariant& a, const EllipticInvariant& b,
                          const ToleranceConfig& tol = {});

/// Sizes of J(1, a) (x) J(1, b): {a+b-1, a+b-3, ..., |a-b|+1}.
std::vector<int> clebsch_gordan_sizes(int a, int b);

/// Determinant point: sum of size * point over the entries.
EPoint determinant_point(const EllipticInvariant& inv);

Matrix kronecker(const Matrix& a, const Matrix& b);
LaurentMatrix kron_constant(const LaurentMatrix& a, const LaurentMatrix& b);

}  // namespace qloop
