#include "qloop/laurent.hpp"

#include <algorithm>
#include <numeric>

namespace qloop {

namespace {

bool all_zero(const Matrix& m) {
    return m.cwiseAbs().maxCoeff() == 0.0;
}

void check_same_shape(const LaurentMatrix& a, const LaurentMatrix& b,
                      const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail("SizeMismatch", std::string(op) + ": operand shapes differ");
    if (a.covering() != b.covering())
        fail("CoveringMismatch",
             std::string(op) + ": operands use different covering denominators");
}

}  // namespace

LaurentMatrix::LaurentMatrix(int rows, int cols, int m_cov, Window w)
    : rows_(rows), cols_(cols), m_cov_(m_cov), window_(w) {
    if (rows < 1 || cols < 1) fail("BadInput", "matrix size must be >= 1");
    if (m_cov < 1) fail("BadInput", "covering denominator must be >= 1");
    if (w.lo > w.hi) fail("BadInput", "window lower bound exceeds upper bound");
}

LaurentMatrix LaurentMatrix::identity(int n) {
    LaurentMatrix r(n, n, 1, Window{0, kExactWindow});
    r.set_coeff(0, Matrix::Identity(n, n));
    return r;
}

LaurentMatrix LaurentMatrix::constant(const Matrix& a) {
    LaurentMatrix r(static_cast<int>(a.rows()), static_cast<int>(a.cols()), 1,
                    Window{0, kExactWindow});
    r.set_coeff(0, a);
    return r;
}

LaurentMatrix LaurentMatrix::monomial(int n, int k, int m_cov) {
    LaurentMatrix r(n, n, m_cov, Window{std::min(k, 0), kExactWindow});
    r.set_coeff(k, Matrix::Identity(n, n));
    return r;
}

LaurentMatrix LaurentMatrix::monomial_diag(const std::vector<int>& ks, int m_cov) {
    int n = static_cast<int>(ks.size());
    int lo = std::min(0, *std::min_element(ks.begin(), ks.end()));
    LaurentMatrix r(n, n, m_cov, Window{lo, kExactWindow});
    for (int i = 0; i < n; ++i) {
        Matrix m = r.coeff(ks[i]);
        m(i, i) = 1.0;
        r.set_coeff(ks[i], m);
    }
    return r;
}

int LaurentMatrix::size() const {
    if (!square()) fail("SizeMismatch", "operation requires a square matrix");
    return rows_;
}

Matrix LaurentMatrix::coeff(int k) const {
    auto it = terms_.find(k);
    if (it != terms_.end()) return it->second;
    return Matrix::Zero(rows_, cols_);
}

void LaurentMatrix::set_coeff(int k, const Matrix& m) {
    if (!window_.contains(k))
        fail("BadInput", "coefficient exponent outside window");
    if (all_zero(m))
        terms_.erase(k);
    else
        terms_[k] = m;
}

double LaurentMatrix::max_norm() const {
    double r = 0.0;
    for (const auto& [k, m] : terms_) r = std::max(r, m.cwiseAbs().maxCoeff());
    return r;
}

int LaurentMatrix::min_exponent(double zero_tol) const {
    for (const auto& [k, m] : terms_)
        if (m.cwiseAbs().maxCoeff() > zero_tol) return k;
    return window_add(window_.hi, 1);
}

int LaurentMatrix::max_exponent(double zero_tol) const {
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
        if (it->second.cwiseAbs().maxCoeff() > zero_tol) return it->first;
    return window_.lo - 1;
}

LaurentMatrix LaurentMatrix::with_window(Window w) const {
    LaurentMatrix r(rows_, cols_, m_cov_, w);
    for (const auto& [k, m] : terms_)
        if (w.contains(k)) r.terms_[k] = m;
    return r;
}

void LaurentMatrix::shrink_hi(int hi) {
    window_.hi = std::min(window_.hi, hi);
    terms_.erase(terms_.upper_bound(window_.hi), terms_.end());
}

LaurentMatrix multiply(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.cols() != b.rows())
        fail("SizeMismatch", "multiply: inner dimensions differ");
    if (a.covering() != b.covering())
        fail("CoveringMismatch", "multiply: covering denominators differ");
    Window w;
    w.lo = window_add(a.window().lo, b.window().lo);
    w.hi = std::min(window_add(a.window().hi, b.window().lo),
                    window_add(b.window().hi, a.window().lo));
    LaurentMatrix r(a.rows(), b.cols(), a.covering(), w);
    std::map<int, Matrix> acc;
    for (const auto& [ka, ma] : a.terms()) {
        for (const auto& [kb, mb] : b.terms()) {
            int k = ka + kb;
            if (k > w.hi) continue;
            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(k, ma * mb);
            else
                it->second += ma * mb;
        }
    }
    for (const auto& [k, m] : acc) r.set_coeff(k, m);
    return r;
}

LaurentMatrix add(const LaurentMatrix& a, const LaurentMatrix& b) {
    check_same_shape(a, b, "add");
    Window w{std::min(a.window().lo, b.window().lo),
             std::min(a.window().hi, b.window().hi)};
    LaurentMatrix r(a.rows(), a.cols(), a.covering(), w);
    for (const auto& [k, m] : a.terms())
        if (k <= w.hi) r.set_coeff(k, m);
    for (const auto& [k, m] : b.terms())
        if (k <= w.hi) r.set_coeff(k, r.coeff(k) + m);
    return r;
}

LaurentMatrix subtract(const LaurentMatrix& a, const LaurentMatrix& b) {
    return add(a, scale(b, Complex(-1, 0)));
}

LaurentMatrix scale(const LaurentMatrix& a, const Complex& c) {
    LaurentMatrix r(a.rows(), a.cols(), a.covering(), a.window());
    for (const auto& [k, m] : a.terms()) r.set_coeff(k, c * m);
    return r;
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

LaurentMatrix rescale_covering(const LaurentMatrix& a, int new_m) {
    if (new_m % a.covering() != 0)
        fail("CoveringMismatch", "rescale_covering: not a multiple of the covering");
    int f = new_m / a.covering();
    if (f == 1) return a;
    Window w;
    w.lo = a.window().lo * f;
    // In the finer covering the exponents strictly between multiples of f are
    // known zero, so knowledge extends through the last such gap.
    w.hi = a.window().exact() ? kExactWindow : a.window().hi * f + (f - 1);
    LaurentMatrix r(a.rows(), a.cols(), new_m, w);
    for (const auto& [k, m] : a.terms()) r.set_coeff(k * f, m);
    return r;
}

LaurentMatrix reduce_covering(const LaurentMatrix& a) {
    if (a.covering() == 1) return a;
    int g = 0;
    for (const auto& [k, m] : a.terms()) g = std::gcd(g, std::abs(k));
    if (g == 0) g = a.covering();
    g = std::gcd(g, a.covering());
    if (g == 1) return a;
    auto floor_div = [](int x, int d) {
        return x >= 0 ? x / d : -((-x + d - 1) / d);
    };
    auto ceil_div = [](int x, int d) {
        return x >= 0 ? (x + d - 1) / d : -((-x) / d);
    };
    Window w;
    w.lo = ceil_div(a.window().lo, g);
    w.hi = a.window().exact() ? kExactWindow : floor_div(a.window().hi, g);
    LaurentMatrix r(a.rows(), a.cols(), a.covering() / g, w);
    for (const auto& [k, m] : a.terms()) r.set_coeff(k / g, m);
    return r;
}

LaurentMatrix q_shift(const LaurentMatrix& a, const ModulusConfig& cfg) {
    LaurentMatrix r(a.rows(), a.cols(), a.covering(), a.window());
    for (const auto& [k, m] : a.terms())
        r.set_coeff(k, cfg.q_power(k, a.covering()) * m);
    return r;
}

LaurentMatrix galois_shift(const LaurentMatrix& a) {
    LaurentMatrix r(a.rows(), a.cols(), a.covering(), a.window());
    for (const auto& [k, m] : a.terms())
        r.set_coeff(k, ModulusConfig::unit_root(k, a.covering()) * m);
    return r;
}

namespace {

LaurentMatrix from_terms(int rows, int cols, int m_cov, Window w,
                         const std::map<int, Matrix>& terms) {
    LaurentMatrix r(rows, cols, m_cov, w);
    for (const auto& [k, m] : terms)
        if (w.contains(k)) r.set_coeff(k, m);
    return r;
}

void accumulate(std::map<int, Matrix>& acc, const LaurentMatrix& x, Complex c) {
    for (const auto& [k, m] : x.terms()) {
        auto it = acc.find(k);
        if (it == acc.end())
            acc.emplace(k, c * m);
        else
            it->second += c * m;
    }
}

/// (I + N)^{-1} for N of valuation >= 1 in units. cap bounds the highest
/// exponent computed when the series does not terminate; a terminating
/// (nilpotent) series keeps the input's exact window.
LaurentMatrix neumann_inverse(const LaurentMatrix& nser, int cap) {
    int n = nser.rows();
    std::map<int, Matrix> acc;
    acc.emplace(0, Matrix::Identity(n, n));
    LaurentMatrix power = rescale_covering(LaurentMatrix::identity(n), nser.covering());
    double sign = -1.0;
    bool terminated = false;
    for (int j = 1; j <= 4 * (cap + 2); ++j) {
        power = multiply(power, nser);
        power.shrink_hi(cap);
        if (!power.has_terms()) {
            terminated = true;
            break;
        }
        accumulate(acc, power, Complex(sign, 0));
        sign = -sign;
    }
    Window w{0, nser.window().exact() ? kExactWindow : nser.window().hi};
    if (!terminated) w.hi = std::min(w.hi, cap);
    return from_terms(n, n, nser.covering(), w, acc);
}

LaurentMatrix shift_rows(const LaurentMatrix& a, const std::vector<int>& by) {
    int mn = *std::min_element(by.begin(), by.end());
    Window w{a.window().lo + mn,
             a.window().exact() ? kExactWindow : a.window().hi + mn};
    LaurentMatrix r(a.rows(), a.cols(), a.covering(), w);
    for (const auto& [k, m] : a.terms()) {
        for (int i = 0; i < a.rows(); ++i) {
            int kk = k + by[i];
            if (kk > w.hi || m.row(i).cwiseAbs().maxCoeff() == 0.0) continue;
            Matrix c = r.coeff(kk);
            c.row(i) += m.row(i);
            r.set_coeff(kk, c);
        }
    }
    return r;
}

LaurentMatrix adjugate_inverse(const LaurentMatrix& a, const ToleranceConfig& tol);

}  // namespace

LaurentMatrix invert(const LaurentMatrix& a, const ToleranceConfig& tol) {
    int n = a.size();
    double zero_tol = tol.eps_eig * std::max(1.0, a.max_norm()) * 1e-3;

    // Row-wise monomial normalization: a = diag(z^{v_i}) * b with every row of
    // b starting at exponent 0.
    std::vector<int> val(n, kExactWindow);
    for (const auto& [k, m] : a.terms())
        for (int i = 0; i < n; ++i)
            if (m.row(i).cwiseAbs().maxCoeff() > zero_tol)
                val[i] = std::min(val[i], k);
    for (int i = 0; i < n; ++i)
        if (val[i] == kExactWindow)
            fail("NonInvertibleLeadingTerm", "a row of the matrix vanishes");

    std::vector<int> neg(n);
    for (int i = 0; i < n; ++i) neg[i] = -val[i];
    LaurentMatrix b = shift_rows(a, neg);
    Matrix b0 = b.coeff(0);

    Eigen::JacobiSVD<Matrix> svd(b0);
    bool leading_ok =
        svd.singularValues()(n - 1) > tol.eps_eig * std::max(1.0, svd.singularValues()(0));
    if (!leading_ok) {
        if (n == 1) fail("NonInvertibleLeadingTerm", "zero leading coefficient");
        return adjugate_inverse(a, tol);
    }

    Matrix b0inv = b0.fullPivLu().inverse();
    LaurentMatrix nser =
        multiply(rescale_covering(LaurentMatrix::constant(b0inv), b.covering()), b);
    nser.set_coeff(0, nser.coeff(0) - Matrix::Identity(n, n));
    int cap = b.window().exact() ? tol.trunc * std::max(1, b.covering())
                                 : b.window().hi;
    LaurentMatrix s = neumann_inverse(nser, cap);
    LaurentMatrix binv =
        multiply(s, rescale_covering(LaurentMatrix::constant(b0inv), b.covering()));
    // a^{-1} = b^{-1} diag(z^{-v_i})
    return multiply(binv, LaurentMatrix::monomial_diag(neg, a.covering()));
}

namespace {

LaurentMatrix minor_matrix(const LaurentMatrix& a, int drop_row, int drop_col) {
    int n = a.size();
    LaurentMatrix r(n - 1, n - 1, a.covering(), a.window());
    for (const auto& [k, m] : a.terms()) {
        Matrix s(n - 1, n - 1);
        for (int i = 0, ii = 0; i < n; ++i) {
            if (i == drop_row) continue;
            for (int j = 0, jj = 0; j < n; ++j) {
                if (j == drop_col) continue;
                s(ii, jj++) = m(i, j);
            }
            ++ii;
        }
        r.set_coeff(k, s);
    }
    return r;
}

LaurentMatrix scalar_entry(const LaurentMatrix& a, int i, int j) {
    LaurentMatrix r(1, 1, a.covering(), a.window());
    for (const auto& [k, m] : a.terms()) {
        Matrix s(1, 1);
        s(0, 0) = m(i, j);
        r.set_coeff(k, s);
    }
    return r;
}

LaurentMatrix adjugate_inverse(const LaurentMatrix& a, const ToleranceConfig& tol) {
    int n = a.size();
    if (n > 8)
        fail("NonInvertibleLeadingTerm",
             "no monomial normalization yields an invertible leading term");
    LaurentMatrix det = det_series(a);
    if (det.max_norm() <= tol.eps_eig * std::max(1.0, std::pow(a.max_norm(), n)))
        fail("NonInvertibleLeadingTerm", "determinant vanishes on the window");
    LaurentMatrix detinv = invert(det, tol);

    std::vector<LaurentMatrix> entries;  // inv(a)_{ji} laid out row-major in (i, j)
    Window w{kExactWindow, kExactWindow};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            LaurentMatrix cof = det_series(minor_matrix(a, i, j));
            if ((i + j) % 2) cof = scale(cof, Complex(-1, 0));
            LaurentMatrix e = multiply(cof, detinv);
            w.lo = std::min(w.lo, e.window().lo);
            w.hi = std::min(w.hi, e.window().hi);
            entries.push_back(std::move(e));
        }
    }
    std::map<int, Matrix> acc;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (const auto& [k, m] : entries[i * n + j].terms()) {
                if (k > w.hi) continue;
                auto it = acc.find(k);
                if (it == acc.end()) it = acc.emplace(k, Matrix::Zero(n, n)).first;
                it->second(j, i) += m(0, 0);
            }
    return from_terms(n, n, a.covering(), w, acc);
}

}  // namespace

LaurentMatrix det_series(const LaurentMatrix& a) {
    int n = a.size();
    if (n == 1) return scalar_entry(a, 0, 0);
    LaurentMatrix acc(1, 1, a.covering(), a.window());
    bool first = true;
    for (int j = 0; j < n; ++j) {
        LaurentMatrix term =
            multiply(scalar_entry(a, 0, j), det_series(minor_matrix(a, 0, j)));
        if (j % 2) term = scale(term, Complex(-1, 0));
        acc = first ? term : add(acc, term);
        first = false;
    }
    return acc;
}

LaurentMatrix twisted_conjugate(const LaurentMatrix& g, const LaurentMatrix& a,
                                const ModulusConfig& cfg,
                                const ToleranceConfig& tol) {
    int m = lcm_int(g.covering(), a.covering());
    LaurentMatrix gg = rescale_covering(g, m);
    LaurentMatrix aa = rescale_covering(a, m);
    return multiply(multiply(q_shift(gg, cfg), aa), invert(gg, tol));
}

LaurentMatrix exp_series(const LaurentMatrix& x, const ToleranceConfig& tol) {
    int n = x.size();
    double dust = 1e-10 * std::max(1.0, x.max_norm());
    if (x.has_terms() && x.min_exponent(dust) < 1)
        fail("ValuationError", "exp_series needs strictly positive valuation");
    int cap = x.window().exact()
                  ? std::max(tol.trunc * std::max(1, x.covering()),
                             n * std::max(1, x.max_exponent()))
                  : x.window().hi;
    std::map<int, Matrix> acc;
    acc.emplace(0, Matrix::Identity(n, n));
    LaurentMatrix term = rescale_covering(LaurentMatrix::identity(n), x.covering());
    bool terminated = false;
    for (int j = 1; j <= 4 * (cap + 2); ++j) {
        term = scale(multiply(term, x), Complex(1.0 / j, 0));
        term.shrink_hi(cap);
        if (!term.has_terms()) {
            terminated = true;
            break;
        }
        accumulate(acc, term, Complex(1, 0));
    }
    Window w{0, x.window().exact() ? kExactWindow : x.window().hi};
    if (!terminated) w.hi = std::min(w.hi, cap);
    return from_terms(n, n, x.covering(), w, acc);
}

LaurentMatrix log_series(const LaurentMatrix& a, const ToleranceConfig& tol) {
    int n = a.size();
    LaurentMatrix nser =
        subtract(a, rescale_covering(LaurentMatrix::identity(n), a.covering()));
    double dust = 1e-10 * std::max(1.0, a.max_norm());
    if (nser.has_terms() && nser.min_exponent(dust) < 1)
        fail("ValuationError", "log_series needs input of the form I + O(z^{1/m})");
    int cap = a.window().exact()
                  ? std::max(tol.trunc * std::max(1, a.covering()),
                             n * std::max(1, nser.max_exponent()))
                  : a.window().hi;
    std::map<int, Matrix> acc;
    LaurentMatrix power = rescale_covering(LaurentMatrix::identity(n), a.covering());
    double sign = 1.0;
    bool terminated = false;
    for (int j = 1; j <= 4 * (cap + 2); ++j) {
        power = multiply(power, nser);
        power.shrink_hi(cap);
        if (!power.has_terms()) {
            terminated = true;
            break;
        }
        accumulate(acc, power, Complex(sign / j, 0));
        sign = -sign;
    }
    Window w{std::min(1, nser.window().lo),
             nser.window().exact() ? kExactWindow : nser.window().hi};
    if (!terminated) w.hi = std::min(w.hi, cap);
    return from_terms(n, n, a.covering(), w, acc);
}

double max_difference(const LaurentMatrix& a, const LaurentMatrix& b) {
    return subtract(a, b).max_norm();
}

bool is_constant(const LaurentMatrix& a, double tol_abs) {
    for (const auto& [k, m] : a.terms())
        if (k != 0 && m.cwiseAbs().maxCoeff() > tol_abs) return false;
    return true;
}

}  // namespace qloop
