#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qloop/types.hpp"

namespace qloop {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

/// A point of Gamma = { z : z^k = q^l }: lambda = e^{2 pi i (tau r + r1)}
/// with r, r1 rational and r1 normalized into [0, 1).
struct GammaExponent {
    Rational r;
    Rational r1;
};

GammaExponent gamma_normalized(Rational r, Rational r1);
Complex gamma_value(const GammaExponent& g, const ModulusConfig& cfg);
bool gamma_equal(const GammaExponent& a, const GammaExponent& b);  // r equal, r1 equal mod 1
GammaExponent gamma_add(const GammaExponent& a, const GammaExponent& b);
GammaExponent gamma_sub(const GammaExponent& a, const GammaExponent& b);

/// Best continued-fraction convergent with denominator <= d_max, accepted
/// when within tol of x.
std::optional<Rational> recognize_rational(double x, long long d_max, double tol);

/// Recognizes lambda in Gamma: rationals r (|r| <= l_max) and r1, both with
/// denominators <= d_max, such that |lambda - e^{2 pi i (tau r + r1)}| < eps_res.
std::optional<GammaExponent> gamma_recognize(Complex lambda, const ModulusConfig& cfg,
                                             const ToleranceConfig& tol);

/// Per-eigenvalue membership data for Gamma, plus the cocharacter (m, phi) of
/// the lattice splitting. Eigenvalue i is either recognized outright or
/// generic with a rational offset against its cluster base.
struct ResonanceData {
    std::vector<std::optional<GammaExponent>> recognized;
    std::vector<int> cluster_id;        ///< -1 when recognized
    std::vector<GammaExponent> offset;  ///< valid where cluster_id >= 0
    long long m = 1;
    std::vector<long long> phi;
    std::vector<Rational> r_assigned;   ///< exact tau-exponent per index, phi = m * r
    std::vector<Complex> s_red_eigs;    ///< lambda_i * q^{-phi_i/m}
};

ResonanceData resonance_analyze(const std::vector<Complex>& eigs,
                                const ModulusConfig& cfg, const ToleranceConfig& tol);

/// True when no eigenvalue and no eigenvalue ratio has a Gamma recognition
/// with nonzero tau-exponent (standard and adjoint representations).
bool is_reduced(const std::vector<Complex>& eigs, const ModulusConfig& cfg,
                const ToleranceConfig& tol);

/// Basis of the saturated relation lattice L and of a complement, with the
/// concatenated bases unimodular. Vectors are rows in Z^n.
struct LatticeSplit {
    std::vector<std::vector<Int>> L_basis;
    std::vector<std::vector<Int>> complement_basis;
};

/// L = integer kernel of the relation matrix (rows = equations, n columns);
/// the complement comes from the same unimodular column transform.
LatticeSplit lattice_split(const std::vector<std::vector<long long>>& relations, int n);

/// Exact-mode eigenvalue: the Gamma part (r, r1) and an optional generic tag;
/// a null tag means the Gamma part is the whole eigenvalue.
struct ExactEigenvalue {
    Rational r;
    Rational r1;
    std::optional<std::string> tag;
};

struct ExactResonanceData {
    long long m = 1;
    std::vector<long long> phi;
    std::vector<Rational> r_assigned;   ///< normalized: base index of each tag group -> 0
    std::vector<ExactEigenvalue> s_red; ///< reduced remainders
    std::vector<std::vector<long long>> relation_matrix;  ///< tag incidence rows
    LatticeSplit split;
};

ExactResonanceData exact_resonance_analyze(const std::vector<ExactEigenvalue>& eigs);

/// Numeric rendering of an exact eigenvalue, with generic tags mapped to the
/// supplied base values.
Complex exact_eigenvalue_value(const ExactEigenvalue& e, const ModulusConfig& cfg,
                               const std::vector<std::pair<std::string, Complex>>& tag_values);

}  // namespace qloop
