#include "qloop/invariant.hpp"

#include <algorithm>
#include <cmath>

namespace qloop {

namespace {

double mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r -= 1.0;
    return r;
}

double circle_distance(double a, double b) {
    double d = std::abs(mod1(a) - mod1(b));
    return std::min(d, 1.0 - d);
}

}  // namespace

EPoint canonical_point(Complex value, const ModulusConfig& cfg) {
    if (!(std::abs(value) > 0)) fail("BadInput", "point value must be nonzero");
    double im_tau = cfg.tau.imag();
    double t_tau = -std::log(std::abs(value)) / (2 * kPi * im_tau);
    double t_one = std::arg(value) / (2 * kPi) - cfg.tau.real() * t_tau;
    return EPoint{mod1(t_tau), mod1(t_one)};
}

Complex point_value(const EPoint& p, const ModulusConfig& cfg) {
    Complex expo = cfg.tau * p.t_tau + Complex(p.t_one, 0);
    return std::exp(Complex(0, 2 * kPi) * expo);
}

double torus_distance(const EPoint& a, const EPoint& b) {
    return std::max(circle_distance(a.t_tau, b.t_tau),
                    circle_distance(a.t_one, b.t_one));
}

EPoint point_add(const EPoint& a, const EPoint& b) {
    return EPoint{mod1(a.t_tau + b.t_tau), mod1(a.t_one + b.t_one)};
}

EPoint point_negate(const EPoint& a) {
    return EPoint{mod1(-a.t_tau), mod1(-a.t_one)};
}

int EllipticInvariant::rank() const {
    int r = 0;
    for (const auto& e : entries) r += e.size;
    return r;
}

void EllipticInvariant::sort_entries() {
    std::sort(entries.begin(), entries.end(),
              [](const InvariantEntry& a, const InvariantEntry& b) {
                  if (a.point.t_tau != b.point.t_tau) return a.point.t_tau < b.point.t_tau;
                  if (a.point.t_one != b.point.t_one) return a.point.t_one < b.point.t_one;
                  return a.size < b.size;
              });
}

bool invariants_equal(const EllipticInvariant& a, const EllipticInvariant& b,
                      double point_tol) {
    if (a.entries.size() != b.entries.size()) return false;
    if (a.rank() != b.rank()) return false;
    // greedy matching; points are either equal or well separated at the
    // scales this artifact works at
    std::vector<bool> used(b.entries.size(), false);
    for (const auto& ea : a.entries) {
        bool matched = false;
        for (size_t j = 0; j < b.entries.size(); ++j) {
            if (used[j] || b.entries[j].size != ea.size) continue;
            if (torus_distance(ea.point, b.entries[j].point) < point_tol) {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

EllipticInvariant atiyah_data(const DescentData& dd, const ModulusConfig& cfg,
                              const ToleranceConfig& tol) {
    EllipticInvariant inv;
    auto joints = joint_block_decomposition(dd.theta_a, dd.c, tol);
    long long m = dd.m;
    for (const auto& jb : joints) {
        double ang = std::arg(jb.theta_eigenvalue) / (2 * kPi);
        long long j = std::llround(mod1(ang) * static_cast<double>(m));
        j %= m;
        if (j < 0) j += m;
        if (std::abs(jb.theta_eigenvalue - ModulusConfig::unit_root(j, m)) >
            std::sqrt(tol.eps_eig))
            fail("VerificationFailed",
                 "theta_a eigenvalue is not an m-th root of unity",
                 ErrorKind::Verification);
        Complex qjm = cfg.q_power(j, m);
        for (const auto& blk : jb.blocks)
            inv.entries.push_back(
                {canonical_point(blk.eigenvalue * qjm, cfg), blk.size});
    }
    inv.sort_entries();
    return inv;
}

EllipticInvariant classify(const LaurentMatrix& a, const ModulusConfig& cfg,
                           const ToleranceConfig& tol) {
    AlignResult ar = align(a, cfg, tol);
    ResonanceData rd = resonance_analyze(ar.form.jordan.eigenvalues_by_column(),
                                         cfg, tol);
    DescentData dd = descend(ar.form, rd, cfg, tol);
    return atiyah_data(dd, cfg, tol);
}

bool equivalent(const LaurentMatrix& a, const LaurentMatrix& b,
                const ModulusConfig& cfg, const ToleranceConfig& tol) {
    return invariants_equal(classify(a, cfg, tol), classify(b, cfg, tol),
                            tol.eps_res);
}

Matrix unipotent_block(int k) {
    Matrix j = Matrix::Identity(k, k);
    for (int i = 0; i + 1 < k; ++i) j(i, i + 1) = 1.0;
    return j;
}

LaurentMatrix synthesize(const EllipticInvariant& inv, const ModulusConfig& cfg) {
    if (inv.entries.empty()) fail("BadInput", "cannot synthesize rank 0");
    int n = inv.rank();
    Matrix a = Matrix::Zero(n, n);
    int pos = 0;
    EllipticInvariant sorted = inv;
    sorted.sort_entries();
    for (const auto& e : sorted.entries) {
        if (e.size < 1) fail("BadInput", "entry size must be >= 1");
        a.block(pos, pos, e.size, e.size) =
            point_value(e.point, cfg) * unipotent_block(e.size);
        pos += e.size;
    }
    return LaurentMatrix::constant(a);
}

std::vector<int> clebsch_gordan_sizes(int a, int b) {
    std::vector<int> out;
    for (int s = a + b - 1; s >= std::abs(a - b) + 1; s -= 2) out.push_back(s);
    return out;
}

EllipticInvariant tensor_data(const EllipticInvariant& a, const EllipticInvariant& b) {
    EllipticInvariant out;
    for (const auto& ea : a.entries)
        for (const auto& eb : b.entries) {
            EPoint p = point_add(ea.point, eb.point);
            for (int s : clebsch_gordan_sizes(ea.size, eb.size))
                out.entries.push_back({p, s});
        }
    out.sort_entries();
    return out;
}

EllipticInvariant dual_data(const EllipticInvariant& a) {
    EllipticInvariant out;
    for (const auto& e : a.entries)
        out.entries.push_back({point_negate(e.point), e.size});
    out.sort_entries();
    return out;
}

EllipticInvariant sum_data(const EllipticInvariant& a, const EllipticInvariant& b) {
    EllipticInvariant out;
    out.entries = a.entries;
    out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
    out.sort_entries();
    return out;
}

int hom_dimension_formula(const EllipticInvariant& a, const EllipticInvariant& b,
                          const ToleranceConfig& tol) {
    EllipticInvariant t = tensor_data(dual_data(a), b);
    EPoint zero{0, 0};
    int dim = 0;
    for (const auto& e : t.entries)
        if (torus_distance(e.point, zero) < tol.eps_res) ++dim;
    return dim;
}

EPoint determinant_point(const EllipticInvariant& inv) {
    EPoint acc{0, 0};
    for (const auto& e : inv.entries) {
        double t_tau = acc.t_tau + e.size * e.point.t_tau;
        double t_one = acc.t_one + e.size * e.point.t_one;
        acc = EPoint{t_tau - std::floor(t_tau), t_one - std::floor(t_one)};
    }
    return acc;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

LaurentMatrix kron_constant(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (!is_constant(a, 0.0) || !is_constant(b, 0.0))
        fail("BadInput", "kron_constant expects constant loops");
    return LaurentMatrix::constant(kronecker(a.coeff(0), b.coeff(0)));
}

}  // namespace qloop
