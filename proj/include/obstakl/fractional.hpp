#pragma once

/// Spectral fractional obstacle problem through the truncated
/// Caffarelli-Silvestre extension on graded cylinder meshes.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "obstakl/assembly.hpp"
#include "obstakl/errors.hpp"
#include "obstakl/fit.hpp"
#include "obstakl/linear_solve.hpp"
#include "obstakl/mesh.hpp"
#include "obstakl/vi_solver.hpp"

namespace obstakl {

/// d_s = 2^{1-2s} Gamma(1-s) / Gamma(s); d_{1/2} = 1.
inline double extension_constant(double s) {
    detail::require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    return std::pow(2.0, 1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

struct FractionalConfig {
    double s = 0.5;
    double alpha = 0.0;
    double d_s = 1.0;
    double Y = 1.0;
    double gamma = 3.1;
    double lambda1 = std::numbers::pi * std::numbers::pi;

    void validate() const {
        detail::require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
        detail::require(std::abs(alpha - (1.0 - 2.0 * s)) < 1e-14, "alpha must equal 1 - 2s");
        detail::require(gamma > 3.0 / (2.0 * s), "grading exponent must exceed 3/(2s)");
        detail::require(Y >= 1.0, "truncation height must be at least 1");
        detail::require(lambda1 > 0.0, "lambda1 must be positive");
    }
};

inline FractionalConfig make_fractional_config(double s, double gamma, double Y,
                                               double lambda1 = std::numbers::pi * std::numbers::pi) {
    FractionalConfig c;
    c.s = s;
    c.alpha = 1.0 - 2.0 * s;
    c.d_s = extension_constant(s);
    c.Y = Y;
    c.gamma = gamma;
    c.lambda1 = lambda1;
    c.validate();
    return c;
}

/// Smallest grading used by default: 5% above the 3/(2s) threshold.
inline double default_gamma(double s) { return 1.05 * 3.0 / (2.0 * s); }

/// Y = max(1, 4/sqrt(lambda1) * log(target_dofs)), so that
/// exp(-sqrt(lambda1) Y / 4) <= 1 / target_dofs.
inline double choose_truncation(double s, double lambda1, double target_dofs) {
    detail::require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    detail::require(lambda1 > 0.0, "lambda1 must be positive");
    detail::require(target_dofs >= 10.0, "choose_truncation needs target_dofs >= 10");
    return std::max(1.0, 4.0 / std::sqrt(lambda1) * std::log(target_dofs));
}

/// Cylinder space over `base` with M graded axial intervals.
inline CylinderSpace fractional_space(const FractionalConfig& cfg, std::shared_ptr<const SimplicialMesh> base,
                                      Index M) {
    cfg.validate();
    return make_cylinder_space(
        std::make_shared<const CylinderMesh>(std::move(base), graded_partition(cfg.Y, M, cfg.gamma)));
}

/// Default n = 1 discretisation: (0,1) with base_n cells and base_n axial
/// intervals, so #T_Y = base_n^2.
inline CylinderSpace fractional_space(const FractionalConfig& cfg, Index base_n) {
    return fractional_space(cfg, std::make_shared<const SimplicialMesh>(uniform_interval_mesh(0.0, 1.0, base_n)),
                            base_n);
}

struct ExtensionSolution {
    CylinderSpace space;
    double alpha = 0.0;
    std::vector<double> V;      ///< all cylinder nodes, zero on Gamma_D
    std::vector<double> trace;  ///< base vertices (plane y = 0)
    double energy = 0.0;        ///< int y^alpha |grad V|^2
    Index ndofs() const { return space.dofs.num_free(); }
};

namespace detail {

inline ExtensionSolution make_extension_solution(CylinderSpace space, double alpha, const SparseOperator& A,
                                                 std::span<const double> free_values) {
    ExtensionSolution sol;
    sol.alpha = alpha;
    sol.energy = dot(free_values, A.apply(free_values));
    sol.V = space.dofs.expand(free_values);
    const Index nb = space.cylinder->num_base_vertices();
    sol.trace.assign(sol.V.begin(), sol.V.begin() + static_cast<std::ptrdiff_t>(nb));
    sol.space = std::move(space);
    return sol;
}

}  // namespace detail

inline ExtensionSolution solve_fractional_linear(const FractionalConfig& cfg, CylinderSpace space,
                                                 const ScalarField& f, CgOptions cg = {}) {
    const SparseOperator A = assemble_weighted_stiffness(space, cfg.alpha);
    const std::vector<double> F = assemble_trace_load(space, f, cfg.d_s);
    const std::vector<double> U = solve_spd(A, F, cg);
    return detail::make_extension_solution(std::move(space), cfg.alpha, A, U);
}

inline ExtensionSolution solve_fractional_linear(const FractionalConfig& cfg, const ScalarField& f, Index base_n,
                                                 CgOptions cg = {}) {
    return solve_fractional_linear(cfg, fractional_space(cfg, base_n), f, cg);
}

struct FractionalObstacleResult {
    ObstacleSystem system;
    ViSolution vi;
    ExtensionSolution extension;
};

/// Trace-plane free nodes carry the constraint V(z,0) >= psi(z).
inline FractionalObstacleResult solve_fractional_obstacle(const FractionalConfig& cfg, CylinderSpace space,
                                                          const ScalarField& f, const ScalarField& psi,
                                                          const SolverOptions& solver) {
    const CylinderMesh& cyl = *space.cylinder;
    const SimplicialMesh& base = cyl.base();
    for (Index b : base.boundary_nodes()) {
        const double v = psi(base.vertex(b));
        if (!(v <= 0.0)) throw InputError("fractional obstacle must satisfy psi <= 0 on the boundary");
    }
    std::vector<Index> constrained;
    std::vector<double> values;
    for (Index node : space.dofs.trace_dofs) {
        const double v = psi(base.vertex(cyl.base_of(node)));
        require_finite(v, "obstacle");
        constrained.push_back(space.dofs.free_index[node]);
        values.push_back(v);
    }
    FractionalObstacleResult r;
    r.system = ObstacleSystem(assemble_weighted_stiffness(space, cfg.alpha), assemble_trace_load(space, f, cfg.d_s),
                              std::move(constrained), values);
    r.vi = solve_obstacle(r.system, solver);
    r.extension = detail::make_extension_solution(std::move(space), cfg.alpha, r.system.A, r.vi.U);
    return r;
}

inline FractionalObstacleResult solve_fractional_obstacle(const FractionalConfig& cfg, const ScalarField& f,
                                                          const ScalarField& psi, Index base_n,
                                                          const SolverOptions& solver) {
    return solve_fractional_obstacle(cfg, fractional_space(cfg, base_n), f, psi, solver);
}

/// Weighted energy of V over Omega x (cut, Y) for each cut.
inline std::vector<double> decay_profile(const ExtensionSolution& sol, std::span<const double> cuts) {
    const CylinderMesh& cyl = *sol.space.cylinder;
    std::vector<double> out;
    out.reserve(cuts.size());
    for (double c : cuts) {
        detail::require(c >= 0.0 && c < cyl.axial().height(), "decay cut outside [0, Y)");
        out.push_back(weighted_energy(cyl, sol.alpha, sol.V, c));
    }
    return out;
}

/// Value at (x, y) of a tensor P1 function given by nodal values on `cyl`;
/// zero above the top of the cylinder.
class CylinderEvaluator {
public:
    explicit CylinderEvaluator(const CylinderMesh& cyl) : cyl_(cyl), base_(cyl.base_ptr()) {}

    double evaluate(std::span<const double> V, const Point& x, double y) const {
        const std::vector<double>& nodes = cyl_.axial().nodes();
        if (y >= nodes.back()) return 0.0;
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), y);
        const Index k = static_cast<Index>(std::max<std::ptrdiff_t>(0, it - nodes.begin() - 1));
        const double t = (y - nodes[k]) / (nodes[k + 1] - nodes[k]);
        const auto [c, lam] = base_.locate(x);
        const auto cell = cyl_.base().cell(c);
        double lower = 0.0, upper = 0.0;
        for (std::size_t j = 0; j < cell.size(); ++j) {
            lower += lam[j] * V[cyl_.node(cell[j], k)];
            upper += lam[j] * V[cyl_.node(cell[j], k + 1)];
        }
        return (1.0 - t) * lower + t * upper;
    }

private:
    const CylinderMesh& cyl_;
    P1Evaluator base_;
};

/// Nodal values on `fine` of a function given on `coarse`; exact when both
/// the base meshes and the axial partitions are nested.
inline std::vector<double> prolongate_cylinder(const CylinderMesh& coarse, std::span<const double> V,
                                               const CylinderMesh& fine) {
    const CylinderEvaluator eval(coarse);
    std::vector<double> out(fine.num_nodes());
    for (Index i = 0; i < fine.num_nodes(); ++i)
        out[i] = eval.evaluate(V, fine.base().vertex(fine.base_of(i)), fine.axial().node(fine.level_of(i)));
    return out;
}

/// sqrt of the weighted energy of V_fine - P V_coarse on the fine cylinder.
inline double extension_energy_distance(const ExtensionSolution& coarse, const ExtensionSolution& fine) {
    const CylinderMesh& fc = *fine.space.cylinder;
    std::vector<double> e = prolongate_cylinder(*coarse.space.cylinder, coarse.V, fc);
    for (Index i = 0; i < e.size(); ++i) e[i] = fine.V[i] - e[i];
    return std::sqrt(std::max(0.0, weighted_energy(fc, fine.alpha, e)));
}

/// Energy-norm error of a discrete solution for f = sin(pi x) on (0,1),
/// whose exact extension U has a(U,U) = d_s lambda^{-s} / 2 with lambda = pi^2.
/// The discrete space is conforming, so |U - U_h|_a^2 = a(U,U) - a(U_h,U_h).
inline double sine_mode_energy_error(const FractionalConfig& cfg, const ExtensionSolution& sol) {
    const double lambda = std::numbers::pi * std::numbers::pi;
    const double exact = cfg.d_s * std::pow(lambda, -cfg.s) / 2.0;
    return std::sqrt(std::max(0.0, exact - sol.energy));
}

struct TruncationProbe {
    std::vector<double> Y_requested;
    std::vector<double> Y_used;    ///< snapped to reference partition nodes
    std::vector<double> distance;  ///< energy-norm distance to the reference solution
    double slope = 0.0;            ///< least-squares slope of log(distance) vs Y
};

/// Solves on Omega x (0, Y) for each Y and compares with the solution at the
/// largest Y. Every Y is snapped to a node of the reference partition (M_ref
/// intervals), so each truncated space embeds in the reference space by zero
/// extension. An empty psi solves the linear problem.
inline TruncationProbe truncation_error_probe(const FractionalConfig& cfg, const ScalarField& f,
                                              const ScalarField& psi, std::vector<double> Y_list,
                                              Index base_n, Index M_ref, const SolverOptions& solver = {}) {
    detail::require(!Y_list.empty(), "truncation probe needs at least one height");
    detail::require(M_ref >= 2, "truncation probe needs M_ref >= 2");
    const double Y_ref = *std::max_element(Y_list.begin(), Y_list.end());
    FractionalConfig ref_cfg = cfg;
    ref_cfg.Y = Y_ref;
    ref_cfg.validate();
    const auto base = std::make_shared<const SimplicialMesh>(uniform_interval_mesh(0.0, 1.0, base_n));
    const GradedPartition ref_part = graded_partition(Y_ref, M_ref, cfg.gamma);

    auto solve_at = [&](Index k) {
        FractionalConfig c = cfg;
        c.Y = ref_part.node(k);
        auto cyl = std::make_shared<const CylinderMesh>(base, graded_partition(c.Y, k, cfg.gamma));
        CylinderSpace space = make_cylinder_space(std::move(cyl));
        if (!psi) return solve_fractional_linear(c, std::move(space), f, solver.cg);
        return solve_fractional_obstacle(c, std::move(space), f, psi, solver).extension;
    };

    const ExtensionSolution ref = solve_at(M_ref);
    const CylinderMesh& rc = *ref.space.cylinder;
    TruncationProbe probe;
    for (double Y : Y_list) {
        detail::require(Y >= 1.0, "truncation heights must be at least 1");
        const auto& nodes = ref_part.nodes();
        Index k = static_cast<Index>(std::min_element(nodes.begin(), nodes.end(),
                                                      [Y](double a, double b) {
                                                          return std::abs(a - Y) < std::abs(b - Y);
                                                      }) -
                                     nodes.begin());
        k = std::max<Index>(k, 1);
        while (nodes[k] < 1.0) ++k;
        const ExtensionSolution sol = solve_at(k);
        std::vector<double> e(rc.num_nodes(), 0.0);
        for (Index i = 0; i < rc.num_nodes(); ++i) {
            const Index lev = rc.level_of(i);
            const double v = lev <= k ? sol.V[sol.space.cylinder->node(rc.base_of(i), lev)] : 0.0;
            e[i] = ref.V[i] - v;
        }
        probe.Y_requested.push_back(Y);
        probe.Y_used.push_back(nodes[k]);
        probe.distance.push_back(std::sqrt(std::max(0.0, weighted_energy(rc, ref.alpha, e))));
    }

    std::vector<double> xs, ys;
    for (Index i = 0; i < probe.distance.size(); ++i)
        if (probe.distance[i] > 0.0) xs.push_back(probe.Y_used[i]), ys.push_back(std::log(probe.distance[i]));
    if (xs.size() >= 2) probe.slope = linear_fit(xs, ys).slope;
    return probe;
}

}  // namespace obstakl
