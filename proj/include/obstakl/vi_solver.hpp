#pragma once

/// Discrete obstacle problems  A U >= F,  U >= psi on the constrained DoFs,
/// (A U - F)_z (U - psi)_z = 0:  projected SOR, primal-dual active set, and
/// KKT certificates.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obstakl/errors.hpp"
#include "obstakl/linear_solve.hpp"
#include "obstakl/sparse.hpp"

namespace obstakl {

/// psi entry of a DoF that carries no constraint. Never compared against:
/// constraint membership is decided by the index set, not by this value.
inline constexpr double kNoConstraint = -std::numeric_limits<double>::infinity();

struct ObstacleSystem {
    SparseOperator A;
    std::vector<double> F;
    std::vector<double> psi;         ///< kNoConstraint outside `constrained`
    std::vector<Index> constrained;  ///< sorted, unique

    ObstacleSystem() = default;

    /// `psi_values[k]` is the bound for DoF `constrained[k]`.
    ObstacleSystem(SparseOperator op, std::vector<double> load, std::vector<Index> constrained_dofs,
                   std::span<const double> psi_values)
        : A(std::move(op)), F(std::move(load)), constrained(std::move(constrained_dofs)) {
        detail::require(A.size() == F.size(), "obstacle system: dim(A) != len(F)");
        detail::require(psi_values.size() == constrained.size(),
                        "obstacle system: one psi value per constrained DoF expected");
        std::vector<std::pair<Index, double>> pairs;
        for (Index k = 0; k < constrained.size(); ++k) pairs.emplace_back(constrained[k], psi_values[k]);
        std::sort(pairs.begin(), pairs.end());
        psi.assign(A.size(), kNoConstraint);
        constrained.clear();
        for (const auto& [z, v] : pairs) {
            detail::require(z < A.size(), "constrained DoF out of range");
            detail::require(constrained.empty() || constrained.back() != z, "duplicate constrained DoF");
            detail::require(std::isfinite(v), "constraint value must be finite");
            constrained.push_back(z);
            psi[z] = v;
        }
    }

    Index size() const { return A.size(); }

    std::vector<char> constraint_mask() const {
        std::vector<char> m(size(), 0);
        for (Index z : constrained) m[z] = 1;
        return m;
    }

    double energy(std::span<const double> U) const {
        const std::vector<double> AU = A.apply(U);
        return 0.5 * dot(U, AU) - dot(F, U);
    }
};

/// Maxima of the complementarity residuals over the constrained DoFs.
/// `stationarity` also covers the unconstrained DoFs, where A U = F must hold.
struct KktReport {
    double infeasibility = 0.0;       ///< max (psi - U)_+
    double stationarity = 0.0;        ///< max |A U - F| over inactive DoFs
    double complementarity = 0.0;     ///< max |(A U - F)_z (U - psi)_z|
    double dual_infeasibility = 0.0;  ///< max (-(A U - F))_+ over active DoFs

    double max() const { return std::max({infeasibility, stationarity, complementarity, dual_infeasibility}); }
};

/// A constrained DoF counts as active when U_z - psi_z <= tol.
inline KktReport kkt_report(const ObstacleSystem& sys, std::span<const double> U, double tol) {
    detail::require(U.size() == sys.size(), "kkt_report: wrong vector length");
    KktReport r;
    const std::vector<double> AU = sys.A.apply(U);
    std::vector<char> mask = sys.constraint_mask();
    for (Index z = 0; z < sys.size(); ++z) {
        const double res = AU[z] - sys.F[z];
        if (!mask[z]) {
            r.stationarity = std::max(r.stationarity, std::abs(res));
            continue;
        }
        const double gap = U[z] - sys.psi[z];
        r.infeasibility = std::max(r.infeasibility, -gap);
        r.complementarity = std::max(r.complementarity, std::abs(res * gap));
        if (gap <= tol)
            r.dual_infeasibility = std::max(r.dual_infeasibility, -res);
        else
            r.stationarity = std::max(r.stationarity, std::abs(res));
    }
    return r;
}

struct ViSolution {
    std::vector<double> U;
    std::vector<Index> active_set;
    KktReport kkt;
    double kkt_residual = 0.0;
    Index iterations = 0;
    std::string solver_id;
};

namespace detail {

inline ViSolution finish(const ObstacleSystem& sys, std::vector<double> U, Index iterations, std::string id,
                         double tol) {
    // feasibility holds exactly; the pivoting branch only guarantees it to tol
    for (Index z : sys.constrained) U[z] = std::max(U[z], sys.psi[z]);
    ViSolution s;
    s.kkt = kkt_report(sys, U, tol);
    s.kkt_residual = s.kkt.max();
    for (Index z : sys.constrained)
        if (U[z] - sys.psi[z] <= tol) s.active_set.push_back(z);
    s.U = std::move(U);
    s.iterations = iterations;
    s.solver_id = std::move(id);
    return s;
}

inline void check_positive_diagonal(const SparseOperator& A) {
    for (Index i = 0; i < A.size(); ++i)
        if (!(A.diagonal(i) > 0.0))
            throw InputError("operator has a non-positive diagonal entry at row " + std::to_string(i));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Projected SOR

struct PsorOptions {
    double omega = 1.5;
    double tol = 1e-10;  ///< on the max-norm change between sweeps
    Index max_iter = 1000000;
    std::optional<std::vector<double>> initial;
    /// Called after every sweep with the sweep count and the current iterate.
    std::function<void(Index, std::span<const double>)> on_sweep;
};

inline ViSolution solve_psor(const ObstacleSystem& sys, const PsorOptions& opt = {}) {
    detail::require(opt.omega > 0.0 && opt.omega < 2.0, "PSOR relaxation must lie in (0, 2)");
    detail::check_positive_diagonal(sys.A);
    const Index n = sys.size();
    const std::vector<char> mask = sys.constraint_mask();
    std::vector<double> U(n, 0.0);
    if (opt.initial) {
        detail::require(opt.initial->size() == n, "PSOR initial guess has wrong length");
        U = *opt.initial;
    }
    for (Index z : sys.constrained) U[z] = std::max(U[z], sys.psi[z]);
    const SparseOperator& A = sys.A;
    double change = 0.0;
    for (Index sweep = 1; sweep <= opt.max_iter; ++sweep) {
        change = 0.0;
        for (Index i = 0; i < n; ++i) {
            double off = 0.0;
            const auto cols = A.row_cols(i);
            const auto vals = A.row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                if (cols[k] != i) off += vals[k] * U[cols[k]];
            double cand = (1.0 - opt.omega) * U[i] + opt.omega * (sys.F[i] - off) / A.diagonal(i);
            if (mask[i]) cand = std::max(cand, sys.psi[i]);
            change = std::max(change, std::abs(cand - U[i]));
            U[i] = cand;
        }
        if (opt.on_sweep) opt.on_sweep(sweep, U);
        if (change < opt.tol) return detail::finish(sys, std::move(U), sweep, "psor", opt.tol);
    }
    throw ConvergenceError("projected SOR did not converge", change, opt.max_iter);
}

// ---------------------------------------------------------------------------
// Primal-dual active set

struct PdasOptions {
    double tol = 1e-10;
    Index max_iter = 500;
    double c = 1.0;  ///< complementarity parameter
    CgOptions cg{};
    /// Warm start for the first active-set guess.
    std::optional<std::vector<double>> initial;
};

/// Active-set updates follow lambda_z + c (psi_z - U_z) > 0. If an active set
/// repeats, the iteration switches to single least-index pivots, which
/// terminate for any symmetric positive definite A.
inline ViSolution solve_pdas(const ObstacleSystem& sys, const PdasOptions& opt = {}) {
    detail::require(opt.c > 0.0, "PDAS parameter c must be positive");
    detail::check_positive_diagonal(sys.A);
    const Index n = sys.size();
    const SparseOperator& A = sys.A;
    const std::vector<char> mask = sys.constraint_mask();

    SpdSolver solver(opt.cg);
    std::vector<double> U(n, 0.0);
    std::vector<double> lambda(n, 0.0);
    std::vector<char> active(n, 0);

    std::optional<std::vector<char>> solved_for;
    auto solve_with = [&](const std::vector<char>& pinned) {
        if (solved_for && *solved_for == pinned) return;
        solved_for = pinned;
        std::vector<double> pinned_values(n, 0.0);
        for (Index z = 0; z < n; ++z)
            if (pinned[z]) pinned_values[z] = sys.psi[z];
        const std::vector<double> Ap = A.apply(pinned_values);
        std::vector<double> rhs(n);
        for (Index z = 0; z < n; ++z) rhs[z] = pinned[z] ? A.diagonal(z) * sys.psi[z] : sys.F[z] - Ap[z];
        const SparseOperator reduced = A.with_pinned(pinned);
        solver.update(reduced);
        for (Index z = 0; z < n; ++z)
            if (pinned[z]) U[z] = sys.psi[z];
        solver.solve(rhs, U);
        for (Index z = 0; z < n; ++z)
            if (pinned[z]) U[z] = sys.psi[z];
        const std::vector<double> AU = A.apply(U);
        for (Index z = 0; z < n; ++z) lambda[z] = pinned[z] ? AU[z] - sys.F[z] : 0.0;
    };

    if (opt.initial) {
        detail::require(opt.initial->size() == n, "PDAS initial guess has wrong length");
        for (Index z : sys.constrained) active[z] = (*opt.initial)[z] <= sys.psi[z] ? 1 : 0;
    } else {
        solve_with(active);  // unconstrained solve
        for (Index z : sys.constrained) active[z] = U[z] < sys.psi[z] ? 1 : 0;
    }

    std::set<std::vector<char>> seen;
    bool pivoting = false;
    for (Index it = 1; it <= opt.max_iter; ++it) {
        solve_with(active);
        std::vector<char> next = active;
        if (!pivoting) {
            for (Index z : sys.constrained) next[z] = lambda[z] + opt.c * (sys.psi[z] - U[z]) > 0.0 ? 1 : 0;
            if (next == active) return detail::finish(sys, std::move(U), it, "pdas", opt.tol);
            seen.insert(active);
            if (seen.count(next)) {
                pivoting = true;
                next = active;
            }
        }
        if (pivoting) {
            bool changed = false;
            for (Index z : sys.constrained) {
                if (active[z] && lambda[z] < -opt.tol) {
                    next[z] = 0;
                    changed = true;
                    break;
                }
                if (!active[z] && U[z] < sys.psi[z] - opt.tol) {
                    next[z] = 1;
                    changed = true;
                    break;
                }
            }
            if (!changed) return detail::finish(sys, std::move(U), it, "pdas", opt.tol);
        }
        active = std::move(next);
    }
    const KktReport r = kkt_report(sys, U, opt.tol);
    throw ConvergenceError("primal-dual active set did not converge", r.max(), opt.max_iter);
}

// ---------------------------------------------------------------------------
// Solver selection

enum class SolverKind { psor, pdas };

inline SolverKind parse_solver_kind(const std::string& name) {
    if (name == "psor") return SolverKind::psor;
    if (name == "pdas") return SolverKind::pdas;
    throw InputError("unknown solver '" + name + "' (expected psor or pdas)");
}

inline const char* to_string(SolverKind k) { return k == SolverKind::psor ? "psor" : "pdas"; }

struct SolverOptions {
    SolverKind kind = SolverKind::pdas;
    double tol = 1e-10;
    Index max_iter = 0;  ///< 0 selects the solver default
    double omega = 1.5;
    CgOptions cg{};
    std::optional<std::vector<double>> initial;
};

inline ViSolution solve_obstacle(const ObstacleSystem& sys, const SolverOptions& opt) {
    if (opt.kind == SolverKind::psor) {
        PsorOptions p;
        p.omega = opt.omega;
        p.tol = opt.tol;
        if (opt.max_iter) p.max_iter = opt.max_iter;
        p.initial = opt.initial;
        return solve_psor(sys, p);
    }
    PdasOptions p;
    p.tol = opt.tol;
    if (opt.max_iter) p.max_iter = opt.max_iter;
    p.cg = opt.cg;
    p.initial = opt.initial;
    return solve_pdas(sys, p);
}

// ---------------------------------------------------------------------------
// OBSVEC v1

inline void write_obsvec(std::ostream& os, std::span<const double> v) {
    char buf[64];
    os << "OBSVEC v1\n" << v.size() << "\n";
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x);
        os << buf;
    }
}

inline std::vector<double> read_obsvec(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != "OBSVEC v1") throw InputError("OBSVEC: bad header");
    std::size_t n = 0;
    if (!(is >> n)) throw InputError("OBSVEC: missing length");
    std::vector<double> v(n);
    for (auto& x : v)
        if (!(is >> x)) throw InputError("OBSVEC: truncated data");
    return v;
}

}  // namespace obstakl
