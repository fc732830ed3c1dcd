#pragma once

/// Thin (Signorini) obstacle problem for -Laplace + I on a rectangle with the
/// unilateral constraint u >= g on the boundary.

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "obstakl/assembly.hpp"
#include "obstakl/errors.hpp"
#include "obstakl/mesh.hpp"
#include "obstakl/vi_solver.hpp"

namespace obstakl {

struct ThinProblem {
    Rect domain;
    ScalarField f;
    ScalarField g;  ///< boundary obstacle, evaluated at boundary nodes only
};

/// Unit square, f = -0.1, and on each side g = 0.1 - (t - 1/2)^2 with t the
/// normalised tangential coordinate along that side. The obstacle is positive
/// near side midpoints and negative near the corners, so the contact set is
/// a proper subset of the boundary.
inline ThinProblem default_thin_problem() {
    ThinProblem p;
    p.domain = {0.0, 0.0, 1.0, 1.0};
    p.f = [](const Point&) { return -0.1; };
    const Rect d = p.domain;
    p.g = [d](const Point& x) {
        const double ex = std::min(std::abs(x.y - d.y0), std::abs(x.y - d.y1));
        const double t = ex <= std::min(std::abs(x.x - d.x0), std::abs(x.x - d.x1))
                             ? (x.x - d.x0) / (d.x1 - d.x0)
                             : (x.y - d.y0) / (d.y1 - d.y0);
        return 0.1 - (t - 0.5) * (t - 0.5);
    };
    return p;
}

struct ThinSolution {
    FeSpace space;
    ObstacleSystem system;
    ViSolution vi;
    std::vector<double> U;  ///< nodal values on all vertices
};

/// All nodes are free; the constrained DoFs are the boundary nodes with
/// bound g(z).
inline ThinSolution solve_thin(const ThinProblem& prob, Index n_per_side, const SolverOptions& solver) {
    ThinSolution s;
    s.space = make_neumann_space(std::make_shared<const SimplicialMesh>(structured_triangle_mesh(prob.domain, n_per_side)));
    const DofMap& dofs = s.space.dofs;
    const SimplicialMesh& mesh = *s.space.mesh;
    std::vector<Index> constrained;
    std::vector<double> g_values;
    for (Index node : dofs.trace_dofs) {
        const double gv = prob.g(mesh.vertex(node));
        if (!std::isfinite(gv)) throw InputError("boundary obstacle is not finite at a boundary node");
        constrained.push_back(dofs.free_index[node]);
        g_values.push_back(gv);
    }
    s.system = ObstacleSystem(assemble_mass_plus_stiffness(s.space), assemble_load(s.space, prob.f),
                              std::move(constrained), g_values);
    s.vi = solve_obstacle(s.system, solver);
    s.U = dofs.expand(s.vi.U);
    return s;
}

/// Complementarity certificate on the boundary DoFs only. The residual
/// (A U - F)_z at a boundary node is the discrete conormal flux.
inline KktReport signorini_report(const FeSpace& space, const ObstacleSystem& sys, std::span<const double> U,
                                  double tol) {
    detail::require(U.size() == sys.size(), "signorini_report: wrong vector length");
    const std::vector<double> AU = sys.A.apply(U);
    KktReport r;
    for (Index node : space.dofs.trace_dofs) {
        const Index z = space.dofs.free_index[node];
        if (z == DofMap::npos) continue;
        const double res = AU[z] - sys.F[z];
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

}  // namespace obstakl
