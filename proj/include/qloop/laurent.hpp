#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qloop/types.hpp"

namespace qloop {

using Matrix = Eigen::MatrixXcd;

/// Matrix of truncated Laurent series in z^{1/m_cov}. Exponents are integers
/// in units of 1/m_cov. Coefficients below window.lo are known zero,
/// coefficients above window.hi are unknown; operations compute the honest
/// output window so that an exact result is provably exact.
///
/// Almost everything in the pipeline is square, but the intertwiner solver
/// works with rectangular blocks, so rows != cols is tolerated.
class LaurentMatrix {
public:
    LaurentMatrix() = default;
    LaurentMatrix(int rows, int cols, int m_cov, Window w);
    LaurentMatrix(int n, int m_cov, Window w) : LaurentMatrix(n, n, m_cov, w) {}

    static LaurentMatrix identity(int n);
    static LaurentMatrix constant(const Matrix& a);
    /// z^{k/m_cov} * I_n
    static LaurentMatrix monomial(int n, int k, int m_cov);
    /// diag(z^{ks[0]/m_cov}, ..., z^{ks[n-1]/m_cov})
    static LaurentMatrix monomial_diag(const std::vector<int>& ks, int m_cov);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int size() const;  // square size; errors if rectangular
    bool square() const { return rows_ == cols_; }
    int covering() const { return m_cov_; }
    const Window& window() const { return window_; }
    const std::map<int, Matrix>& terms() const { return terms_; }

    Matrix coeff(int k) const;               ///< zero matrix when not stored
    void set_coeff(int k, const Matrix& m);  ///< drops all-zero coefficients

    bool has_terms() const { return !terms_.empty(); }
    double max_norm() const;  ///< max over coefficients of the max abs entry
    /// Smallest exponent carrying a coefficient with an entry above zero_tol;
    /// window.hi + 1 when there is none.
    int min_exponent(double zero_tol = 0.0) const;
    int max_exponent(double zero_tol = 0.0) const;

    LaurentMatrix with_window(Window w) const;  ///< restrict; drops outside terms
    void shrink_hi(int hi);

private:
    int rows_ = 0, cols_ = 0;
    int m_cov_ = 1;
    Window window_{0, kExactWindow};
    std::map<int, Matrix> terms_;
};

LaurentMatrix multiply(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix add(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix subtract(const LaurentMatrix& a, const LaurentMatrix& b);
LaurentMatrix scale(const LaurentMatrix& a, const Complex& c);

/// Re-express in a finer covering; new_m must be a multiple of a.covering().
LaurentMatrix rescale_covering(const LaurentMatrix& a, int new_m);
/// Drop to the coarsest covering in which all stored exponents are integral.
LaurentMatrix reduce_covering(const LaurentMatrix& a);

/// Inverse on the maximal window justified by the input window. Inputs must be
/// invertible over C((z^{1/m})); throws NonInvertibleLeadingTerm otherwise.
/// Exact inputs whose inverse is an infinite series are truncated at
/// tol.trunc exponent units past the valuation, and the window says so.
LaurentMatrix invert(const LaurentMatrix& a, const ToleranceConfig& tol = {});

/// z^{1/m} -> e^{2 pi i tau/m} z^{1/m}: coefficient at exponent k gets the
/// factor e^{2 pi i tau k/m_cov}.
LaurentMatrix q_shift(const LaurentMatrix& a, const ModulusConfig& cfg);

/// Galois generator z^{1/m} -> e^{2 pi i/m} z^{1/m}.
LaurentMatrix galois_shift(const LaurentMatrix& a);

/// g(qz) a(z) g(z)^{-1}. Coverings are brought to a common multiple first.
LaurentMatrix twisted_conjugate(const LaurentMatrix& g, const LaurentMatrix& a,
                                const ModulusConfig& cfg,
                                const ToleranceConfig& tol = {});

/// Truncated exponential of a series of strictly positive valuation.
LaurentMatrix exp_series(const LaurentMatrix& x, const ToleranceConfig& tol = {});
/// Truncated logarithm of I + (strictly positive valuation).
LaurentMatrix log_series(const LaurentMatrix& a, const ToleranceConfig& tol = {});

/// Determinant as a 1x1 Laurent series (cofactor expansion).
LaurentMatrix det_series(const LaurentMatrix& a);

/// Largest coefficient norm of a - b over the common window.
double max_difference(const LaurentMatrix& a, const LaurentMatrix& b);

/// True when every coefficient at a nonzero exponent is below tol in norm.
bool is_constant(const LaurentMatrix& a, double tol_abs);

int lcm_int(int a, int b);

}  // namespace qloop
