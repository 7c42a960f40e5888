#pragma once

#include "qloop/invariant.hpp"

namespace qloop::test {

inline Matrix m1(Complex a) {
    Matrix m(1, 1);
    m(0, 0) = a;
    return m;
}

inline Matrix m2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Matrix diag2(Complex a, Complex b) { return m2(a, 0, 0, b); }

/// [[a00, a01],[a10, a11]] + z * [[b00, b01],[b10, b11]]
inline LaurentMatrix linear2(const Matrix& c0, const Matrix& c1) {
    LaurentMatrix a(2, 2, 1, Window{0, kExactWindow});
    a.set_coeff(0, c0);
    a.set_coeff(1, c1);
    return a;
}

inline ModulusConfig default_modulus() { return ModulusConfig(Complex(0.3, 1.1)); }

/// a generic spectral parameter, away from every Gamma point at test scales
inline Complex generic_lambda() { return Complex(1.17, 0.43); }

}  // namespace qloop::test
