#pragma once

/// Preconditioned conjugate gradients for SPD sparse systems.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "obstakl/errors.hpp"
#include "obstakl/sparse.hpp"

namespace obstakl {

enum class Preconditioner { jacobi, cholesky };

struct CgOptions {
    double rel_tol = 1e-12;
    Index max_iter = 100000;
    Preconditioner preconditioner = Preconditioner::cholesky;
};

struct CgResult {
    Index iterations = 0;
    double rel_residual = 0.0;
};

/// CG driver that keeps its preconditioner between solves. With the Cholesky
/// preconditioner the symbolic analysis is done once; later `update` calls
/// must pass an operator with the same sparsity pattern.
class SpdSolver {
public:
    explicit SpdSolver(CgOptions options = {}) : options_(options) {}

    const CgOptions& options() const { return options_; }

    void update(const SparseOperator& A) {
        A_ = &A;
        const Index n = A.size();
        if (options_.preconditioner == Preconditioner::jacobi) {
            inv_diag_.resize(n);
            for (Index i = 0; i < n; ++i) {
                const double d = A.diagonal(i);
                if (!(d > 0.0))
                    throw InputError("non-positive diagonal at row " + std::to_string(i));
                inv_diag_[i] = 1.0 / d;
            }
            return;
        }
        Eigen::SparseMatrix<double> lower(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(A.nnz() / 2 + n);
        for (Index i = 0; i < n; ++i) {
            const auto cols = A.row_cols(i);
            const auto vals = A.row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                if (cols[k] <= i)
                    t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k]), vals[k]);
        }
        lower.setFromTriplets(t.begin(), t.end());
        if (!analyzed_ || analyzed_n_ != n || analyzed_nnz_ != A.nnz()) {
            llt_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower>>();
            llt_->analyzePattern(lower);
            analyzed_ = true;
            analyzed_n_ = n;
            analyzed_nnz_ = A.nnz();
        }
        llt_->factorize(lower);
        if (llt_->info() != Eigen::Success) throw InputError("sparse factorization failed: operator is singular");
        const Eigen::VectorXd D = llt_->vectorD();  // returned by value
        for (Eigen::Index i = 0; i < D.size(); ++i)
            if (!(D[i] > 0.0)) throw InputError("operator is not positive definite");
    }

    /// Solves A x = b starting from the initial guess in x.
    CgResult solve(std::span<const double> b, std::span<double> x) const {
        detail::require(A_ != nullptr, "SpdSolver::solve called before update");
        const SparseOperator& A = *A_;
        const Index n = A.size();
        detail::require(b.size() == n && x.size() == n, "CG: size mismatch");
        const double bnorm = norm2(b);
        if (bnorm == 0.0) {
            std::fill(x.begin(), x.end(), 0.0);
            return {0, 0.0};
        }
        std::vector<double> r(n), z(n), p(n), q(n);
        A.multiply(x, r);
        for (Index i = 0; i < n; ++i) r[i] = b[i] - r[i];
        double rel = norm2(r) / bnorm;
        if (rel <= options_.rel_tol) return {0, rel};
        precondition(r, z);
        p = z;
        double rz = dot(r, z);
        for (Index it = 1; it <= options_.max_iter; ++it) {
            A.multiply(p, q);
            const double pq = dot(p, q);
            if (!(pq > 0.0)) throw InputError("CG breakdown: operator is not positive definite");
            const double step = rz / pq;
            for (Index i = 0; i < n; ++i) {
                x[i] += step * p[i];
                r[i] -= step * q[i];
            }
            rel = norm2(r) / bnorm;
            if (rel <= options_.rel_tol) return {it, rel};
            precondition(r, z);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (Index i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        throw ConvergenceError("conjugate gradients did not converge", rel, options_.max_iter);
    }

private:
    void precondition(std::span<const double> r, std::span<double> z) const {
        const Index n = r.size();
        if (options_.preconditioner == Preconditioner::jacobi) {
            for (Index i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
            return;
        }
        Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(n));
        Eigen::Map<Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(n));
        zv = llt_->solve(rv);
    }

    CgOptions options_;
    const SparseOperator* A_ = nullptr;
    std::vector<double> inv_diag_;
    std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower>> llt_;
    bool analyzed_ = false;
    Index analyzed_n_ = 0;
    Index analyzed_nnz_ = 0;
};

/// One-shot SPD solve from a zero initial guess.
inline std::vector<double> solve_spd(const SparseOperator& A, std::span<const double> b,
                                     CgOptions options = {}, CgResult* info = nullptr) {
    SpdSolver solver(options);
    solver.update(A);
    std::vector<double> x(A.size(), 0.0);
    const CgResult r = solver.solve(b, x);
    if (info) *info = r;
    return x;
}

}  // namespace obstakl
