#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qloop {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/// Window upper bound marking an exact element: everything above the highest
/// stored exponent is known to be zero, not merely unknown.
constexpr int kExactWindow = 1 << 28;

inline int window_add(int a, int b) {
    long long s = static_cast<long long>(a) + static_cast<long long>(b);
    return s >= kExactWindow ? kExactWindow : static_cast<int>(s);
}

/// Exponent range on which a truncated Laurent series is known. Coefficients
/// below lo are known to vanish; coefficients above hi are unknown.
struct Window {
    int lo = 0;
    int hi = kExactWindow;
    bool exact() const { return hi >= kExactWindow; }
    bool contains(int k) const { return k >= lo && k <= hi; }
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Classifies an error for the CLI exit-code contract: BadInput -> 2,
/// Verification -> 3.
enum class ErrorKind { BadInput, Verification };

class Error : public std::runtime_error {
public:
    Error(std::string code, std::string detail, ErrorKind kind)
        : std::runtime_error(code + ": " + detail),
          code_(std::move(code)), detail_(std::move(detail)), kind_(kind) {}
    const std::string& code() const { return code_; }
    const std::string& detail() const { return detail_; }
    ErrorKind kind() const { return kind_; }

private:
    std::string code_, detail_;
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail,
                              ErrorKind kind = ErrorKind::BadInput) {
    throw Error(code, detail, kind);
}

/// The modulus: tau in the upper half-plane is the primitive; q = e^{2 pi i tau}
/// and all fractional powers of q are derived from tau so that branches are
/// fixed once and for all.
struct ModulusConfig {
    Complex tau{0.3, 1.1};

    ModulusConfig() = default;
    explicit ModulusConfig(Complex t) : tau(t) { validate(); }

    void validate() const {
        if (!is_finite(tau)) fail("BadModulus", "tau must be finite");
        if (!(tau.imag() > 0)) fail("BadModulus", "Im(tau) must be positive");
    }

    Complex q() const { return std::exp(Complex(0, 2 * kPi) * tau); }
    /// e^{2 pi i tau k / m}; q_power(k, 1) = q^k.
    Complex q_power(long long k, long long m = 1) const {
        return std::exp(Complex(0, 2 * kPi) * tau *
                        (static_cast<double>(k) / static_cast<double>(m)));
    }
    /// e^{2 pi i k / m}, the order-m root of unity.
    static Complex unit_root(long long k, long long m) {
        double a = 2 * kPi * static_cast<double>(k) / static_cast<double>(m);
        return Complex(std::cos(a), std::sin(a));
    }
};

struct ToleranceConfig {
    double eps_eig = 1e-8;  ///< eigenvalue clustering / rank decision (relative)
    double eps_res = 1e-6;  ///< resonance recognition tolerance
    int d_max = 24;         ///< denominator bound for rational recognition
    int l_max = 16;         ///< power bound for q-exponents
    int trunc = 32;         ///< default truncation order, in exponent units

    void validate() const {
        if (!(eps_eig > 0) || !(eps_res > 0))
            fail("BadTolerance", "tolerances must be positive");
        if (d_max < 1 || l_max < 1 || trunc < 1)
            fail("BadTolerance", "d_max, l_max, trunc must be >= 1");
    }
};

}  // namespace qloop
