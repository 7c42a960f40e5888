#pragma once

#include <vector>

#include "qloop/laurent.hpp"
#include "qloop/types.hpp"

namespace qloop {

/// Multiplicative Jordan decomposition A = S U = U S with S semisimple and U
/// unipotent, together with an eigenbasis of S adapted to the clustered
/// generalized eigenspaces. Clusters are ordered by weakly increasing |mu|
/// (ties by argument), so the weight spaces g_{q^k}, k >= 1, of Ad(S) sit
/// strictly above the block diagonal.
struct JordanData {
    Matrix S, U, P;                  ///< A = S U, P columns = adapted basis
    std::vector<Complex> cluster_values;
    std::vector<int> cluster_mult;
    std::vector<int> column_cluster;  ///< cluster index of each P column

    int size() const { return static_cast<int>(P.rows()); }
    /// Per-column eigenvalue (cluster representative), length n.
    std::vector<Complex> eigenvalues_by_column() const;
};

/// Weight space decomposition of the adjoint action of S in the eigenbasis:
/// position (i, j) carries the eigenvalue lambda_i / lambda_j.
struct WeightData {
    Matrix ratio_table;              ///< n x n table of eigenvalue ratios
    std::vector<int> resonant_exponents;  ///< all k >= 1 with some ratio ~ q^k
    int K = 0;                       ///< max resonant exponent, 0 if none
};

struct JordanBlock {
    Complex eigenvalue;
    int size;
};

struct JointBlock {
    Complex theta_eigenvalue;
    std::vector<JordanBlock> blocks;  ///< Jordan type of c restricted there
};

JordanData jordan_decomposition(const Matrix& a, const ToleranceConfig& tol = {});

WeightData weight_decomposition(const JordanData& j, const ModulusConfig& cfg,
                                const ToleranceConfig& tol = {});

/// Simultaneous decomposition of a commuting pair: theta semisimple of finite
/// order, c arbitrary invertible. Splits the space into theta-eigenspaces and
/// reports the Jordan type of c on each.
std::vector<JointBlock> joint_block_decomposition(const Matrix& theta,
                                                  const Matrix& c,
                                                  const ToleranceConfig& tol = {});

/// Jordan type of a single matrix (all eigenvalues), via rank sequences.
std::vector<JordanBlock> jordan_type(const Matrix& a, const ToleranceConfig& tol = {});

/// dim of the centralizer of a, from its Jordan type:
/// sum over eigenvalues of sum_{i,j} min(n_i, n_j).
int centralizer_dimension(const Matrix& a, const ToleranceConfig& tol = {});

/// Single-linkage clustering of complex values at relative distance eps.
/// Returns per-value cluster labels; representatives are cluster means.
std::vector<int> cluster_values(const std::vector<Complex>& vals, double eps,
                                std::vector<Complex>* reps = nullptr);

/// Numerical rank by singular value threshold eps * sigma_max.
int numerical_rank(const Matrix& a, double eps);

/// Orthonormal basis of the null space of a (columns), by SVD.
Matrix null_space(const Matrix& a, double eps);

}  // namespace qloop
