#include "qloop/spectral.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qloop {

namespace {

// Computed eigenvalues of a defective block of size k scatter like
// (machine eps)^{1/k} around the true value, so the clustering threshold
// needs a floor far above machine precision. Cluster means cancel the
// scatter to first order and stay accurate to ~1e-12, which is what every
// downstream ratio test uses.
double cluster_eps(const ToleranceConfig& tol) {
    return std::max(tol.eps_eig, 2e-3);
}

}  // namespace

std::vector<Complex> JordanData::eigenvalues_by_column() const {
    std::vector<Complex> r(column_cluster.size());
    for (size_t i = 0; i < column_cluster.size(); ++i)
        r[i] = cluster_values[column_cluster[i]];
    return r;
}

std::vector<int> cluster_values(const std::vector<Complex>& vals, double eps,
                                std::vector<Complex>* reps) {
    int n = static_cast<int>(vals.size());
    std::vector<int> label(n, -1);
    // union-find over the relative-distance graph
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double scale = std::max({1e-300, std::abs(vals[i]), std::abs(vals[j])});
            if (std::abs(vals[i] - vals[j]) <= eps * scale)
                parent[find(i)] = find(j);
        }
    int next = 0;
    std::vector<int> root_label(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (root_label[r] < 0) root_label[r] = next++;
        label[i] = root_label[r];
    }
    if (reps) {
        reps->assign(next, Complex(0, 0));
        std::vector<int> cnt(next, 0);
        for (int i = 0; i < n; ++i) {
            (*reps)[label[i]] += vals[i];
            ++cnt[label[i]];
        }
        for (int c = 0; c < next; ++c) (*reps)[c] /= static_cast<double>(cnt[c]);
    }
    return label;
}

int numerical_rank(const Matrix& a, double eps) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > eps * s(0)) ++r;
    return r;
}

Matrix null_space(const Matrix& a, double eps) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(0) > 0 && s(i) > eps * s(0)) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

JordanData jordan_decomposition(const Matrix& a, const ToleranceConfig& tol) {
    int n = static_cast<int>(a.rows());
    if (a.rows() != a.cols()) fail("SizeMismatch", "jordan: matrix not square");
    Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    std::vector<Complex> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = es.eigenvalues()(i);
    for (const auto& l : eigs)
        if (std::abs(l) <= tol.eps_eig)
            fail("SingularInput", "jordan: matrix is singular within tolerance");

    std::vector<Complex> reps;
    std::vector<int> label = cluster_values(eigs, cluster_eps(tol), &reps);
    int nc = static_cast<int>(reps.size());
    std::vector<int> mult(nc, 0);
    for (int i = 0; i < n; ++i) ++mult[label[i]];

    // weakly increasing |mu|, ties by argument, for a deterministic order that
    // puts the positive weight spaces above the diagonal
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        double ax = std::abs(reps[x]), ay = std::abs(reps[y]);
        if (ax != ay) return ax < ay;
        return std::arg(reps[x]) < std::arg(reps[y]);
    });

    JordanData jd;
    jd.P = Matrix(n, n);
    int col = 0;
    for (int oc = 0; oc < nc; ++oc) {
        int c = order[oc];
        // generalized eigenspace: the mult[c] least singular directions of
        // (A - mu I)^mult
        Matrix b = Matrix::Identity(n, n);
        Matrix shifted = a - reps[c] * Matrix::Identity(n, n);
        for (int p = 0; p < mult[c]; ++p) b = shifted * b;
        Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullV);
        Matrix basis = svd.matrixV().rightCols(mult[c]);
        jd.P.middleCols(col, mult[c]) = basis;
        jd.cluster_values.push_back(reps[c]);
        jd.cluster_mult.push_back(mult[c]);
        for (int p = 0; p < mult[c]; ++p) jd.column_cluster.push_back(oc);
        col += mult[c];
    }
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = jd.cluster_values[jd.column_cluster[i]];
    Matrix pinv = jd.P.fullPivLu().inverse();
    jd.S = jd.P * d * pinv;
    jd.U = jd.S.fullPivLu().solve(a);
    return jd;
}

WeightData weight_decomposition(const JordanData& j, const ModulusConfig& cfg,
                                const ToleranceConfig& tol) {
    int n = j.size();
    std::vector<Complex> lam = j.eigenvalues_by_column();
    WeightData wd;
    wd.ratio_table = Matrix(n, n);
    double min_ratio = 1.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            wd.ratio_table(r, c) = lam[r] / lam[c];
            min_ratio = std::min(min_ratio, std::abs(wd.ratio_table(r, c)));
        }
    // |q| < 1 bounds the possible exponents by magnitudes
    Complex q = cfg.q();
    int k_bound = tol.l_max;
    if (min_ratio > 0) {
        double est = std::log(min_ratio) / std::log(std::abs(q));
        k_bound = std::min(k_bound, static_cast<int>(std::ceil(est)) + 1);
    }
    for (int k = 1; k <= k_bound; ++k) {
        Complex qk = std::pow(q, k);
        bool found = false;
        for (int r = 0; r < n && !found; ++r)
            for (int c = 0; c < n && !found; ++c)
                if (std::abs(wd.ratio_table(r, c) - qk) < tol.eps_res * std::abs(qk))
                    found = true;
        if (found) {
            wd.resonant_exponents.push_back(k);
            wd.K = k;
        }
    }
    return wd;
}

namespace {

std::vector<JordanBlock> jordan_type_of(const Matrix& a, const ToleranceConfig& tol) {
    int n = static_cast<int>(a.rows());
    std::vector<JordanBlock> out;
    if (n == 0) return out;
    Eigen::ComplexEigenSolver<Matrix> es(a, false);
    std::vector<Complex> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = es.eigenvalues()(i);
    std::vector<Complex> reps;
    std::vector<int> label = cluster_values(eigs, cluster_eps(tol), &reps);
    int nc = static_cast<int>(reps.size());
    std::vector<int> mult(nc, 0);
    for (int i = 0; i < n; ++i) ++mult[label[i]];

    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        double ax = std::abs(reps[x]), ay = std::abs(reps[y]);
        if (ax != ay) return ax < ay;
        return std::arg(reps[x]) < std::arg(reps[y]);
    });

    for (int oc : order) {
        // rank sequence of (a - mu I)^p; the Ferrers transpose of the rank
        // drops gives the block sizes
        Matrix shifted = a - reps[oc] * Matrix::Identity(n, n);
        std::vector<int> ranks{n};
        Matrix p = Matrix::Identity(n, n);
        while (true) {
            p = shifted * p;
            int r = numerical_rank(p, tol.eps_eig);
            ranks.push_back(r);
            int null_dim = n - r;
            if (null_dim >= mult[oc] || ranks.size() > static_cast<size_t>(n) + 1)
                break;
        }
        std::vector<int> drops;  // drops[p] = #blocks of size >= p+1
        for (size_t p2 = 0; p2 + 1 < ranks.size(); ++p2)
            drops.push_back(ranks[p2] - ranks[p2 + 1]);
        for (size_t sz = drops.size(); sz >= 1; --sz) {
            int count = drops[sz - 1] - (sz < drops.size() ? drops[sz] : 0);
            for (int b = 0; b < count; ++b)
                out.push_back({reps[oc], static_cast<int>(sz)});
        }
    }
    return out;
}

}  // namespace

std::vector<JordanBlock> jordan_type(const Matrix& a, const ToleranceConfig& tol) {
    return jordan_type_of(a, tol);
}

int centralizer_dimension(const Matrix& a, const ToleranceConfig& tol) {
    auto blocks = jordan_type_of(a, tol);
    std::vector<Complex> vals;
    for (const auto& b : blocks) vals.push_back(b.eigenvalue);
    std::vector<int> label = cluster_values(vals, cluster_eps(tol), nullptr);
    int dim = 0;
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = 0; j < blocks.size(); ++j)
            if (label[i] == label[j])
                dim += std::min(blocks[i].size, blocks[j].size);
    return dim;
}

std::vector<JointBlock> joint_block_decomposition(const Matrix& theta,
                                                  const Matrix& c,
                                                  const ToleranceConfig& tol) {
    int n = static_cast<int>(theta.rows());
    if (theta.rows() != theta.cols() || c.rows() != c.cols() || c.rows() != n)
        fail("SizeMismatch", "joint decomposition: shapes differ");
    double comm = (theta * c - c * theta).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, theta.cwiseAbs().maxCoeff() * c.cwiseAbs().maxCoeff());
    if (comm > std::sqrt(tol.eps_eig) * scale)
        fail("NonCommutingPair", "joint decomposition: theta and c do not commute",
             ErrorKind::Verification);

    Eigen::ComplexEigenSolver<Matrix> es(theta, false);
    std::vector<Complex> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = es.eigenvalues()(i);
    std::vector<Complex> reps;
    std::vector<int> label = cluster_values(eigs, cluster_eps(tol), &reps);
    int nc = static_cast<int>(reps.size());
    std::vector<int> mult(nc, 0);
    for (int i = 0; i < n; ++i) ++mult[label[i]];

    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        double ax = std::arg(reps[x]), ay = std::arg(reps[y]);
        if (ax != ay) return ax < ay;
        return std::abs(reps[x]) < std::abs(reps[y]);
    });

    std::vector<JointBlock> out;
    for (int oc : order) {
        // theta is semisimple, so the eigenspace is the plain null space
        Matrix shifted = theta - reps[oc] * Matrix::Identity(n, n);
        Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
        Matrix basis = svd.matrixV().rightCols(mult[oc]);
        Matrix restr = basis.adjoint() * c * basis;
        JointBlock jb;
        jb.theta_eigenvalue = reps[oc];
        jb.blocks = jordan_type_of(restr, tol);
        out.push_back(std::move(jb));
    }
    return out;
}

}  // namespace qloop
