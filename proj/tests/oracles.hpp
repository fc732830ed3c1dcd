#pragma once

// Independent reference computations for the test suites. Dense linear
// algebra only; nothing here goes through the library's solvers.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "obstakl/vi_solver.hpp"

namespace oracle {

using obstakl::Index;

inline Eigen::MatrixXd dense(const obstakl::SparseOperator& A) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.size(), A.size());
    for (Index i = 0; i < A.size(); ++i) {
        const auto cols = A.row_cols(i);
        const auto vals = A.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) D(i, cols[k]) = vals[k];
    }
    return D;
}

/// Enumerates every subset S of the constrained DoFs, pins U_S = psi_S,
/// solves for the rest and returns the first point satisfying all KKT
/// conditions (unique for SPD A).
inline std::optional<std::vector<double>> brute_force_kkt(const obstakl::ObstacleSystem& sys, double tol = 1e-11) {
    const Eigen::MatrixXd A = dense(sys.A);
    const Index n = sys.size();
    const Index m = sys.constrained.size();
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        std::vector<char> pinned(n, 0);
        for (Index k = 0; k < m; ++k)
            if (mask & (1ul << k)) pinned[sys.constrained[k]] = 1;
        std::vector<Index> free;
        for (Index i = 0; i < n; ++i)
            if (!pinned[i]) free.push_back(i);
        Eigen::VectorXd U = Eigen::VectorXd::Zero(n);
        for (Index i = 0; i < n; ++i)
            if (pinned[i]) U[i] = sys.psi[i];
        if (!free.empty()) {
            Eigen::MatrixXd Aff(free.size(), free.size());
            Eigen::VectorXd rhs(free.size());
            for (std::size_t a = 0; a < free.size(); ++a) {
                rhs[a] = sys.F[free[a]];
                for (Index j = 0; j < n; ++j)
                    if (pinned[j]) rhs[a] -= A(free[a], j) * U[j];
                for (std::size_t b = 0; b < free.size(); ++b) Aff(a, b) = A(free[a], free[b]);
            }
            const Eigen::VectorXd x = Aff.ldlt().solve(rhs);
            for (std::size_t a = 0; a < free.size(); ++a) U[free[a]] = x[a];
        }
        const Eigen::VectorXd F = Eigen::Map<const Eigen::VectorXd>(sys.F.data(), n);
        const Eigen::VectorXd lambda = A * U - F;
        bool ok = true;
        for (Index z : sys.constrained) {
            if (U[z] < sys.psi[z] - tol) ok = false;
            if (pinned[z] && lambda[z] < -tol) ok = false;
        }
        if (ok) return std::vector<double>(U.data(), U.data() + n);
    }
    return std::nullopt;
}

/// A = B B^T / n + 0.5 I with B standard normal; F and psi standard normal;
/// each DoF constrained with probability 3/4.
inline obstakl::ObstacleSystem random_system(std::mt19937& rng, Index n) {
    std::normal_distribution<double> nd;
    std::bernoulli_distribution coin(0.75);
    Eigen::MatrixXd B(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) B(i, j) = nd(rng);
    const Eigen::MatrixXd D = B * B.transpose() / static_cast<double>(n) + 0.5 * Eigen::MatrixXd::Identity(n, n);
    std::vector<obstakl::Triplet> t;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) t.push_back({i, j, D(i, j)});
    std::vector<double> F(n);
    for (double& f : F) f = nd(rng);
    std::vector<Index> constrained;
    std::vector<double> psi;
    for (Index i = 0; i < n; ++i)
        if (coin(rng)) {
            constrained.push_back(i);
            psi.push_back(nd(rng));
        }
    return obstakl::ObstacleSystem(obstakl::SparseOperator::symmetric_from_upper(n, t), F, constrained, psi);
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace oracle
