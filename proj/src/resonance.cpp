#include "qloop/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace qloop {

double to_double(const Rational& r) {
    return static_cast<double>(boost::multiprecision::numerator(r)) /
           static_cast<double>(boost::multiprecision::denominator(r));
}

namespace {

Rational mod1(const Rational& x) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    Int num = numerator(x), den = denominator(x);
    Int f = num % den;
    if (f < 0) f += den;
    return Rational(f, den);
}

}  // namespace

GammaExponent gamma_normalized(Rational r, Rational r1) {
    return GammaExponent{std::move(r), mod1(r1)};
}

Complex gamma_value(const GammaExponent& g, const ModulusConfig& cfg) {
    Complex expo = cfg.tau * to_double(g.r) + Complex(to_double(g.r1), 0);
    return std::exp(Complex(0, 2 * kPi) * expo);
}

bool gamma_equal(const GammaExponent& a, const GammaExponent& b) {
    return a.r == b.r && mod1(a.r1) == mod1(b.r1);
}

GammaExponent gamma_add(const GammaExponent& a, const GammaExponent& b) {
    return gamma_normalized(a.r + b.r, a.r1 + b.r1);
}

GammaExponent gamma_sub(const GammaExponent& a, const GammaExponent& b) {
    return gamma_normalized(a.r - b.r, a.r1 - b.r1);
}

std::optional<Rational> recognize_rational(double x, long long d_max, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    double sign = x < 0 ? -1.0 : 1.0;
    double y = std::abs(x);
    long long p_prev = 0, q_prev = 1, p = 1, q = 0;
    double frac = y;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        if (fl > 1e9) break;
        long long a = static_cast<long long>(fl);
        long long p_next = a * p + p_prev;
        long long q_next = a * q + q_prev;
        if (q_next > d_max || p_next < 0 || q_next < 0) break;
        p_prev = p; q_prev = q; p = p_next; q = q_next;
        double rem = frac - fl;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
    }
    if (q == 0) return std::nullopt;
    Rational cand(sign < 0 ? -Int(p) : Int(p), Int(q));
    if (std::abs(x - to_double(cand)) <= tol) return cand;
    return std::nullopt;
}

std::optional<GammaExponent> gamma_recognize(Complex lambda, const ModulusConfig& cfg,
                                             const ToleranceConfig& tol) {
    if (!(std::abs(lambda) > 0)) return std::nullopt;
    double im_tau = cfg.tau.imag();
    double r_real = -std::log(std::abs(lambda)) / (2 * kPi * im_tau);
    if (std::abs(r_real) > static_cast<double>(tol.l_max) + 0.5) return std::nullopt;
    // angular error eps in the value moves r by about eps/(2 pi Im tau |lambda|)
    double r_tol = std::max(tol.eps_res, tol.eps_res /
                                             (2 * kPi * im_tau * std::abs(lambda)));
    auto r = recognize_rational(r_real, tol.d_max, r_tol);
    if (!r) return std::nullopt;
    if (boost::multiprecision::abs(boost::multiprecision::numerator(*r)) >
        Int(tol.l_max) * boost::multiprecision::denominator(*r))
        return std::nullopt;
    double r1_real = std::arg(lambda) / (2 * kPi) - cfg.tau.real() * to_double(*r);
    r1_real -= std::floor(r1_real);
    auto try_r1 = [&](double x) -> std::optional<Rational> {
        return recognize_rational(x, tol.d_max,
                                  std::max(tol.eps_res,
                                           tol.eps_res / (2 * kPi * std::abs(lambda))));
    };
    std::optional<Rational> r1 = try_r1(r1_real);
    if (!r1) r1 = try_r1(r1_real - 1.0);
    if (!r1) return std::nullopt;
    GammaExponent g = gamma_normalized(*r, *r1);
    if (std::abs(lambda - gamma_value(g, cfg)) < tol.eps_res) return g;
    return std::nullopt;
}

ResonanceData resonance_analyze(const std::vector<Complex>& eigs,
                                const ModulusConfig& cfg, const ToleranceConfig& tol) {
    int n = static_cast<int>(eigs.size());
    ResonanceData rd;
    rd.recognized.resize(n);
    rd.cluster_id.assign(n, -1);
    rd.offset.assign(n, GammaExponent{});
    rd.r_assigned.assign(n, Rational(0));

    std::vector<int> generic;
    for (int i = 0; i < n; ++i) {
        rd.recognized[i] = gamma_recognize(eigs[i], cfg, tol);
        if (rd.recognized[i])
            rd.r_assigned[i] = rd.recognized[i]->r;
        else
            generic.push_back(i);
    }

    // graph on the generic indices: an edge wherever the ratio lies in Gamma
    int g = static_cast<int>(generic.size());
    std::map<std::pair<int, int>, GammaExponent> edge;  // (a, b): lambda_b / lambda_a
    for (int a = 0; a < g; ++a)
        for (int b = a + 1; b < g; ++b) {
            auto rec = gamma_recognize(eigs[generic[b]] / eigs[generic[a]], cfg, tol);
            if (rec) edge[{a, b}] = *rec;
        }

    std::vector<int> comp(g, -1);
    int next_comp = 0;
    for (int start = 0; start < g; ++start) {
        if (comp[start] >= 0) continue;
        int cid = next_comp++;
        comp[start] = cid;
        rd.cluster_id[generic[start]] = cid;
        rd.offset[generic[start]] = GammaExponent{Rational(0), Rational(0)};
        std::vector<int> queue{start};
        while (!queue.empty()) {
            int a = queue.back();
            queue.pop_back();
            for (int b = 0; b < g; ++b) {
                auto it = edge.find({std::min(a, b), std::max(a, b)});
                if (it == edge.end() || b == a) continue;
                GammaExponent step = a < b ? it->second
                                           : gamma_sub(GammaExponent{}, it->second);
                GammaExponent off = gamma_add(rd.offset[generic[a]], step);
                if (comp[b] < 0) {
                    comp[b] = cid;
                    rd.cluster_id[generic[b]] = cid;
                    rd.offset[generic[b]] = off;
                    queue.push_back(b);
                } else if (!gamma_equal(rd.offset[generic[b]], off)) {
                    fail("InconsistentResonanceGraph",
                         "two paths through the resonance graph assign different "
                         "offsets; d_max/l_max too small or ill-conditioned input",
                         ErrorKind::Verification);
                }
            }
        }
    }
    for (int a = 0; a < g; ++a) rd.r_assigned[generic[a]] = rd.offset[generic[a]].r;

    Int m(1);
    for (const auto& r : rd.r_assigned)
        m = boost::multiprecision::lcm(m, boost::multiprecision::denominator(r));
    rd.m = static_cast<long long>(m);
    rd.phi.resize(n);
    rd.s_red_eigs.resize(n);
    for (int i = 0; i < n; ++i) {
        Rational p = rd.r_assigned[i] * Rational(m);
        rd.phi[i] = static_cast<long long>(boost::multiprecision::numerator(p));
        rd.s_red_eigs[i] = eigs[i] * std::exp(Complex(0, -2 * kPi) * cfg.tau *
                                              to_double(rd.r_assigned[i]));
    }
    return rd;
}

bool is_reduced(const std::vector<Complex>& eigs, const ModulusConfig& cfg,
                const ToleranceConfig& tol) {
    int n = static_cast<int>(eigs.size());
    auto violates = [&](Complex v) {
        auto rec = gamma_recognize(v, cfg, tol);
        return rec && rec->r != 0;
    };
    for (int i = 0; i < n; ++i) {
        if (violates(eigs[i])) return false;
        for (int j = 0; j < n; ++j)
            if (j != i && violates(eigs[i] / eigs[j])) return false;
    }
    return true;
}

LatticeSplit lattice_split(const std::vector<std::vector<long long>>& relations, int n) {
    size_t rows = relations.size();
    for (const auto& row : relations)
        if (static_cast<int>(row.size()) != n)
            fail("BadInput", "lattice_split: relation row length differs from n");

    // column reduction by unimodular operations; U tracks them
    std::vector<std::vector<Int>> a(rows, std::vector<Int>(n));
    for (size_t i = 0; i < rows; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = relations[i][j];
    std::vector<std::vector<Int>> u(n, std::vector<Int>(n, Int(0)));
    for (int j = 0; j < n; ++j) u[j][j] = 1;

    auto col_sub = [&](int dst, int src, const Int& t) {
        for (size_t i = 0; i < rows; ++i) a[i][dst] -= t * a[i][src];
        for (int i = 0; i < n; ++i) u[i][dst] -= t * u[i][src];
    };
    auto col_swap = [&](int x, int y) {
        if (x == y) return;
        for (size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
        for (int i = 0; i < n; ++i) std::swap(u[i][x], u[i][y]);
    };

    int act = 0;
    for (size_t row = 0; row < rows && act < n; ++row) {
        while (true) {
            int smallest = -1;
            int count = 0;
            for (int j = act; j < n; ++j) {
                if (a[row][j] == 0) continue;
                ++count;
                if (smallest < 0 || boost::multiprecision::abs(a[row][j]) <
                                        boost::multiprecision::abs(a[row][smallest]))
                    smallest = j;
            }
            if (count == 0) break;
            if (count == 1) {
                col_swap(smallest, act);
                ++act;
                break;
            }
            for (int j = act; j < n; ++j) {
                if (j == smallest || a[row][j] == 0) continue;
                Int t = a[row][j] / a[row][smallest];  // truncated division
                if (t != 0) col_sub(j, smallest, t);
            }
        }
    }

    LatticeSplit out;
    for (int j = 0; j < act; ++j) {
        std::vector<Int> v(n);
        for (int i = 0; i < n; ++i) v[i] = u[i][j];
        out.complement_basis.push_back(std::move(v));
    }
    for (int j = act; j < n; ++j) {
        std::vector<Int> v(n);
        for (int i = 0; i < n; ++i) v[i] = u[i][j];
        out.L_basis.push_back(std::move(v));
    }
    return out;
}

ExactResonanceData exact_resonance_analyze(const std::vector<ExactEigenvalue>& eigs) {
    int n = static_cast<int>(eigs.size());
    ExactResonanceData out;
    out.r_assigned.assign(n, Rational(0));

    // tag groups in first-appearance order; the first index of each group is
    // its base, so the numeric path (which measures offsets against the
    // lexicographically smallest cluster index) produces the same exponents
    std::vector<std::string> tags;
    std::vector<int> tag_of(n, -1);
    std::map<std::string, int> tag_index;
    std::map<std::string, int> tag_base;
    for (int i = 0; i < n; ++i) {
        if (!eigs[i].tag) continue;
        auto [it, inserted] = tag_index.try_emplace(*eigs[i].tag,
                                                    static_cast<int>(tags.size()));
        if (inserted) {
            tags.push_back(*eigs[i].tag);
            tag_base[*eigs[i].tag] = i;
        }
        tag_of[i] = it->second;
    }
    for (int i = 0; i < n; ++i) {
        if (!eigs[i].tag) {
            out.r_assigned[i] = eigs[i].r;
        } else {
            out.r_assigned[i] = eigs[i].r - eigs[tag_base[*eigs[i].tag]].r;
        }
    }

    Int m(1);
    for (const auto& r : out.r_assigned)
        m = boost::multiprecision::lcm(m, boost::multiprecision::denominator(r));
    out.m = static_cast<long long>(m);
    out.phi.resize(n);
    for (int i = 0; i < n; ++i) {
        Rational p = out.r_assigned[i] * Rational(m);
        out.phi[i] = static_cast<long long>(boost::multiprecision::numerator(p));
    }

    out.s_red.resize(n);
    for (int i = 0; i < n; ++i) {
        ExactEigenvalue red;
        red.r = eigs[i].r - out.r_assigned[i];  // 0 for untagged, base exponent otherwise
        red.r1 = mod1(eigs[i].r1);
        red.tag = eigs[i].tag;
        out.s_red[i] = std::move(red);
    }

    out.relation_matrix.assign(tags.size(), std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        if (tag_of[i] >= 0) out.relation_matrix[tag_of[i]][i] = 1;
    out.split = lattice_split(out.relation_matrix, n);
    return out;
}

Complex exact_eigenvalue_value(const ExactEigenvalue& e, const ModulusConfig& cfg,
                               const std::vector<std::pair<std::string, Complex>>& tag_values) {
    Complex v = gamma_value(GammaExponent{e.r, e.r1}, cfg);
    if (e.tag) {
        for (const auto& [name, val] : tag_values)
            if (name == *e.tag) return v * val;
        fail("BadInput", "exact eigenvalue references an unknown tag: " + *e.tag);
    }
    return v;
}

}  // namespace qloop
