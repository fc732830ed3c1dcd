#pragma once

/// P1 and tensor P1 x P1 finite element spaces: operators, loads, nodal
/// interpolation and error norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obstakl/errors.hpp"
#include "obstakl/mesh.hpp"
#include "obstakl/quadrature.hpp"
#include "obstakl/sparse.hpp"
#include "obstakl/weighted_axial.hpp"

namespace obstakl {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// Node bookkeeping shared by all spaces. Free DoFs are numbered in
/// increasing node order.
struct DofMap {
    static constexpr Index npos = static_cast<Index>(-1);

    Index num_nodes = 0;
    std::vector<Index> free_dofs;
    std::vector<Index> dirichlet_dofs;
    std::vector<Index> trace_dofs;  ///< nodes on the constraint surface
    std::vector<Index> free_index;  ///< node -> position in free_dofs, or npos

    static DofMap from_mask(Index n, const std::vector<char>& dirichlet, std::vector<Index> trace) {
        DofMap d;
        d.num_nodes = n;
        d.free_index.assign(n, npos);
        for (Index i = 0; i < n; ++i) {
            if (dirichlet[i]) {
                d.dirichlet_dofs.push_back(i);
            } else {
                d.free_index[i] = d.free_dofs.size();
                d.free_dofs.push_back(i);
            }
        }
        d.trace_dofs = std::move(trace);
        return d;
    }

    Index num_free() const { return free_dofs.size(); }
    bool is_free(Index node) const { return free_index[node] != npos; }

    /// Free-DoF positions of the trace nodes.
    std::vector<Index> trace_positions() const {
        std::vector<Index> out;
        out.reserve(trace_dofs.size());
        for (Index t : trace_dofs)
            if (is_free(t)) out.push_back(free_index[t]);
        return out;
    }

    std::vector<double> expand(std::span<const double> free_values) const {
        detail::require(free_values.size() == num_free(), "expand: wrong vector length");
        std::vector<double> full(num_nodes, 0.0);
        for (Index k = 0; k < free_dofs.size(); ++k) full[free_dofs[k]] = free_values[k];
        return full;
    }

    std::vector<double> restrict_to_free(std::span<const double> full) const {
        detail::require(full.size() == num_nodes, "restrict: wrong vector length");
        std::vector<double> out(num_free());
        for (Index k = 0; k < free_dofs.size(); ++k) out[k] = full[free_dofs[k]];
        return out;
    }
};

/// P1 space on a simplicial mesh.
struct FeSpace {
    std::shared_ptr<const SimplicialMesh> mesh;
    DofMap dofs;
};

/// Homogeneous Dirichlet space; every interior node is a trace (constrained) node.
inline FeSpace make_dirichlet_space(std::shared_ptr<const SimplicialMesh> mesh) {
    const Index n = mesh->num_vertices();
    std::vector<char> dir(n, 0);
    for (Index b : mesh->boundary_nodes()) dir[b] = 1;
    DofMap d = DofMap::from_mask(n, dir, mesh->interior_nodes());
    return {std::move(mesh), std::move(d)};
}

/// No Dirichlet nodes; the boundary nodes form the trace set.
inline FeSpace make_neumann_space(std::shared_ptr<const SimplicialMesh> mesh) {
    const Index n = mesh->num_vertices();
    std::vector<char> dir(n, 0);
    DofMap d = DofMap::from_mask(n, dir, mesh->boundary_nodes());
    return {std::move(mesh), std::move(d)};
}

/// Tensor P1 x P1 space on a cylinder, zero on Gamma_D; trace nodes are the
/// free nodes of the plane y = 0.
struct CylinderSpace {
    std::shared_ptr<const CylinderMesh> cylinder;
    DofMap dofs;
};

inline CylinderSpace make_cylinder_space(std::shared_ptr<const CylinderMesh> cyl) {
    const Index n = cyl->num_nodes();
    std::vector<char> dir(n, 0);
    std::vector<Index> trace;
    for (Index i = 0; i < n; ++i) {
        dir[i] = cyl->is_dirichlet(i) ? 1 : 0;
        if (!dir[i] && cyl->on_trace_plane(i)) trace.push_back(i);
    }
    DofMap d = DofMap::from_mask(n, dir, std::move(trace));
    return {std::move(cyl), std::move(d)};
}

// ---------------------------------------------------------------------------
// Element geometry

struct P1Element {
    int num_nodes = 0;
    std::array<Index, 3> nodes{};
    double measure = 0.0;
    std::array<Point, 3> grads{};  ///< constant basis gradients
};

inline P1Element p1_element(const SimplicialMesh& mesh, Index c) {
    P1Element e;
    const auto v = mesh.cell(c);
    e.num_nodes = static_cast<int>(v.size());
    for (int k = 0; k < e.num_nodes; ++k) e.nodes[k] = v[k];
    const double sm = mesh.signed_measure(c);
    if (!(std::abs(sm) > 0.0)) throw AssemblyError("degenerate cell " + std::to_string(c));
    e.measure = std::abs(sm);
    if (mesh.dim() == 1) {
        e.grads[0] = {-1.0 / sm, 0.0};
        e.grads[1] = {1.0 / sm, 0.0};
        return e;
    }
    const double two_a = 2.0 * sm;
    for (int k = 0; k < 3; ++k) {
        const Point& p1 = mesh.vertex(v[(k + 1) % 3]);
        const Point& p2 = mesh.vertex(v[(k + 2) % 3]);
        e.grads[k] = {(p1.y - p2.y) / two_a, (p2.x - p1.x) / two_a};
    }
    return e;
}

inline Point map_to_cell(const SimplicialMesh& mesh, const P1Element& e, const QuadPoint& q) {
    Point x{0.0, 0.0};
    for (int k = 0; k < e.num_nodes; ++k) {
        const Point& p = mesh.vertex(e.nodes[k]);
        x.x += q.lambda[k] * p.x;
        x.y += q.lambda[k] * p.y;
    }
    return x;
}

inline double p1_mass_entry(const P1Element& e, int i, int j) {
    const double d = e.num_nodes - 1;
    return e.measure / ((d + 1.0) * (d + 2.0)) * (i == j ? 2.0 : 1.0);
}

inline double p1_stiffness_entry(const P1Element& e, int i, int j) {
    return e.measure * (e.grads[i].x * e.grads[j].x + e.grads[i].y * e.grads[j].y);
}

// ---------------------------------------------------------------------------
// Operators

namespace detail {

/// Assembles stiffness_coeff * K + mass_coeff * M restricted to free DoFs.
inline SparseOperator assemble_p1(const SimplicialMesh& mesh, const DofMap& dofs,
                                  double stiffness_coeff, double mass_coeff) {
    std::vector<Triplet> upper;
    upper.reserve(mesh.num_cells() * 6);
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const P1Element e = p1_element(mesh, c);
        for (int i = 0; i < e.num_nodes; ++i) {
            const Index gi = dofs.free_index[e.nodes[i]];
            if (gi == DofMap::npos) continue;
            for (int j = 0; j < e.num_nodes; ++j) {
                const Index gj = dofs.free_index[e.nodes[j]];
                if (gj == DofMap::npos || gj < gi) continue;
                const double v = stiffness_coeff * p1_stiffness_entry(e, i, j) +
                                 mass_coeff * p1_mass_entry(e, i, j);
                upper.push_back({gi, gj, v});
            }
        }
    }
    return SparseOperator::symmetric_from_upper(dofs.num_free(), upper);
}

inline DofMap all_free(Index n) { return DofMap::from_mask(n, std::vector<char>(n, 0), {}); }

}  // namespace detail

/// (grad u, grad v) on the free DoFs of the space.
inline SparseOperator assemble_stiffness(const FeSpace& space) {
    return detail::assemble_p1(*space.mesh, space.dofs, 1.0, 0.0);
}

/// (grad u, grad v) over every node, before any boundary elimination.
inline SparseOperator assemble_stiffness_all_nodes(const SimplicialMesh& mesh) {
    return detail::assemble_p1(mesh, detail::all_free(mesh.num_vertices()), 1.0, 0.0);
}

inline SparseOperator assemble_mass(const FeSpace& space) {
    return detail::assemble_p1(*space.mesh, space.dofs, 0.0, 1.0);
}

/// (grad u, grad v) + (u, v).
inline SparseOperator assemble_mass_plus_stiffness(const FeSpace& space) {
    return detail::assemble_p1(*space.mesh, space.dofs, 1.0, 1.0);
}

namespace detail {

/// Local prism matrix Kx (x) My + Mx (x) Ky, node order (base i, axial k) -> i + k*nb.
template <typename Visit>
void for_each_prism_matrix(const CylinderMesh& cyl, double alpha, Visit&& visit) {
    const SimplicialMesh& base = cyl.base();
    const GradedPartition& axial = cyl.axial();
    std::vector<P1Element> base_elems(base.num_cells());
    for (Index c = 0; c < base.num_cells(); ++c) base_elems[c] = p1_element(base, c);
    for (Index k = 0; k < axial.intervals(); ++k) {
        const double a = axial.node(k), b = axial.node(k + 1);
        if (!(b > a)) throw AssemblyError("axial interval " + std::to_string(k) + " has zero length");
        const AxialElement ax = axial_element(a, b, alpha);
        for (Index c = 0; c < base.num_cells(); ++c) visit(k, base_elems[c], ax);
    }
}

}  // namespace detail

/// int_{C_Y} y^alpha grad U . grad W for tensor P1 x P1 on the free DoFs.
inline SparseOperator assemble_weighted_stiffness(const CylinderSpace& space, double alpha) {
    detail::require(std::abs(alpha) < 1.0, "weight exponent must satisfy |alpha| < 1");
    const CylinderMesh& cyl = *space.cylinder;
    const DofMap& dofs = space.dofs;
    std::vector<Triplet> upper;
    detail::for_each_prism_matrix(cyl, alpha, [&](Index k, const P1Element& e, const AxialElement& ax) {
        const int nb = e.num_nodes;
        for (int li = 0; li < 2 * nb; ++li) {
            const int bi = li % nb, ki = li / nb;
            const Index gi = dofs.free_index[cyl.node(e.nodes[bi], k + ki)];
            if (gi == DofMap::npos) continue;
            for (int lj = 0; lj < 2 * nb; ++lj) {
                const int bj = lj % nb, kj = lj / nb;
                const Index gj = dofs.free_index[cyl.node(e.nodes[bj], k + kj)];
                if (gj == DofMap::npos || gj < gi) continue;
                const double v = p1_stiffness_entry(e, bi, bj) * ax.mass[ki][kj] +
                                 p1_mass_entry(e, bi, bj) * ax.stiffness[ki][kj];
                upper.push_back({gi, gj, v});
            }
        }
    });
    return SparseOperator::symmetric_from_upper(dofs.num_free(), upper);
}

/// int y^alpha |grad V|^2 over Omega x (cut, Y) for a nodal vector V on all
/// cylinder nodes. Prisms cut by y = cut are integrated exactly on their upper part.
inline double weighted_energy(const CylinderMesh& cyl, double alpha, std::span<const double> V,
                              double cut = 0.0) {
    detail::require(V.size() == cyl.num_nodes(), "weighted_energy: wrong vector length");
    const SimplicialMesh& base = cyl.base();
    const GradedPartition& axial = cyl.axial();
    double energy = 0.0;
    for (Index k = 0; k < axial.intervals(); ++k) {
        const double a = axial.node(k), b = axial.node(k + 1);
        if (b <= cut) continue;
        const AxialElement ax = axial_element(a, b, alpha, std::max(a, cut), b);
        for (Index c = 0; c < base.num_cells(); ++c) {
            const P1Element e = p1_element(base, c);
            const int nb = e.num_nodes;
            std::array<double, 6> local{};
            for (int l = 0; l < 2 * nb; ++l) local[l] = V[cyl.node(e.nodes[l % nb], k + l / nb)];
            for (int li = 0; li < 2 * nb; ++li)
                for (int lj = 0; lj < 2 * nb; ++lj) {
                    const int bi = li % nb, ki = li / nb, bj = lj % nb, kj = lj / nb;
                    energy += local[li] * local[lj] *
                              (p1_stiffness_entry(e, bi, bj) * ax.mass[ki][kj] +
                               p1_mass_entry(e, bi, bj) * ax.stiffness[ki][kj]);
                }
        }
    }
    return energy;
}

// ---------------------------------------------------------------------------
// Loads and interpolation

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InputError(std::string(what) + ": non-finite value");
}

/// F_z = int f phi_z over the mesh, for every mesh node (Gauss rule per cell).
inline std::vector<double> load_all_nodes(const SimplicialMesh& mesh, const ScalarField& f) {
    std::vector<double> F(mesh.num_vertices(), 0.0);
    const QuadRule rule = load_rule(mesh.dim());
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const P1Element e = p1_element(mesh, c);
        for (const QuadPoint& q : rule) {
            const double fv = f(map_to_cell(mesh, e, q));
            require_finite(fv, "load");
            for (int k = 0; k < e.num_nodes; ++k) F[e.nodes[k]] += e.measure * q.weight * fv * q.lambda[k];
        }
    }
    return F;
}

/// Load vector on the free DoFs for a callable right-hand side.
inline std::vector<double> assemble_load(const FeSpace& space, const ScalarField& f) {
    return space.dofs.restrict_to_free(load_all_nodes(*space.mesh, f));
}

/// Load vector for nodal data with the vertex (lumped) rule.
inline std::vector<double> assemble_load_nodal(const FeSpace& space, std::span<const double> values) {
    const SimplicialMesh& mesh = *space.mesh;
    detail::require(values.size() == mesh.num_vertices(), "nodal load: wrong vector length");
    std::vector<double> F(mesh.num_vertices(), 0.0);
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const P1Element e = p1_element(mesh, c);
        for (int k = 0; k < e.num_nodes; ++k) {
            require_finite(values[e.nodes[k]], "load");
            F[e.nodes[k]] += e.measure / e.num_nodes * values[e.nodes[k]];
        }
    }
    return space.dofs.restrict_to_free(F);
}

/// scale * int_Omega f tr(phi_z): nonzero only at trace-plane DoFs.
inline std::vector<double> assemble_trace_load(const CylinderSpace& space, const ScalarField& f,
                                               double scale) {
    const CylinderMesh& cyl = *space.cylinder;
    const std::vector<double> base_load = load_all_nodes(cyl.base(), f);
    std::vector<double> F(space.dofs.num_free(), 0.0);
    for (Index b = 0; b < cyl.num_base_vertices(); ++b) {
        const Index g = space.dofs.free_index[cyl.node(b, 0)];
        if (g != DofMap::npos) F[g] = scale * base_load[b];
    }
    return F;
}

/// Nodal values g(z) on every mesh vertex.
inline std::vector<double> interpolate_nodal(const SimplicialMesh& mesh, const ScalarField& g) {
    std::vector<double> out(mesh.num_vertices());
    for (Index i = 0; i < mesh.num_vertices(); ++i) out[i] = g(mesh.vertex(i));
    return out;
}

inline std::vector<double> interpolate_nodal(const FeSpace& space, const ScalarField& g) {
    return interpolate_nodal(*space.mesh, g);
}

// ---------------------------------------------------------------------------
// Error norms (U is a nodal vector over all mesh vertices)

struct ErrorNorms {
    double h1_semi = 0.0;
    double l2 = 0.0;
    double linf = 0.0;

    double h1() const { return std::sqrt(h1_semi * h1_semi + l2 * l2); }
};

inline ErrorNorms error_norms(const SimplicialMesh& mesh, std::span<const double> U, const ScalarField& exact,
                              const VectorField& exact_grad) {
    detail::require(U.size() == mesh.num_vertices(), "error_norms: wrong vector length");
    ErrorNorms err;
    double h1sq = 0.0, l2sq = 0.0;
    const QuadRule rule = error_rule(mesh.dim());
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const P1Element e = p1_element(mesh, c);
        Point gU{0.0, 0.0};
        for (int k = 0; k < e.num_nodes; ++k) {
            gU.x += U[e.nodes[k]] * e.grads[k].x;
            gU.y += U[e.nodes[k]] * e.grads[k].y;
        }
        for (const QuadPoint& q : rule) {
            const Point x = map_to_cell(mesh, e, q);
            double uh = 0.0;
            for (int k = 0; k < e.num_nodes; ++k) uh += q.lambda[k] * U[e.nodes[k]];
            const double du = exact(x) - uh;
            double dgx = -gU.x, dgy = -gU.y;
            if (exact_grad) {
                const Point g = exact_grad(x);
                dgx += g.x;
                dgy += g.y;
            }
            h1sq += e.measure * q.weight * (dgx * dgx + dgy * dgy);
            l2sq += e.measure * q.weight * du * du;
            err.linf = std::max(err.linf, std::abs(du));
        }
    }
    for (Index i = 0; i < mesh.num_vertices(); ++i)
        err.linf = std::max(err.linf, std::abs(exact(mesh.vertex(i)) - U[i]));
    err.h1_semi = std::sqrt(h1sq);
    err.l2 = std::sqrt(l2sq);
    return err;
}

/// ||grad(u - U)||_{L2}.
inline double energy_norm_error(const FeSpace& space, std::span<const double> U, const ScalarField& exact,
                                const VectorField& exact_grad) {
    return error_norms(*space.mesh, U, exact, exact_grad).h1_semi;
}

// ---------------------------------------------------------------------------
// Point evaluation of P1 functions

/// Locates points in a mesh (binary search in 1D, bucket grid in 2D) and
/// evaluates P1 nodal vectors there.
class P1Evaluator {
public:
    explicit P1Evaluator(std::shared_ptr<const SimplicialMesh> mesh) : mesh_(std::move(mesh)) {
        const SimplicialMesh& m = *mesh_;
        lo_ = hi_ = m.vertex(0);
        for (const Point& p : m.vertices()) {
            lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
            hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
        }
        if (m.dim() == 1) {
            for (Index c = 0; c < m.num_cells(); ++c) {
                const auto v = m.cell(c);
                sorted_.emplace_back(std::min(m.vertex(v[0]).x, m.vertex(v[1]).x), c);
            }
            std::sort(sorted_.begin(), sorted_.end());
            return;
        }
        nb_ = std::max<Index>(1, static_cast<Index>(std::sqrt(static_cast<double>(m.num_cells()) / 2.0)));
        buckets_.assign(nb_ * nb_, {});
        for (Index c = 0; c < m.num_cells(); ++c) {
            Point clo = m.vertex(m.cell(c)[0]), chi = clo;
            for (Index v : m.cell(c)) {
                const Point& p = m.vertex(v);
                clo = {std::min(clo.x, p.x), std::min(clo.y, p.y)};
                chi = {std::max(chi.x, p.x), std::max(chi.y, p.y)};
            }
            const auto [i0, j0] = bucket(clo);
            const auto [i1, j1] = bucket(chi);
            for (Index j = j0; j <= j1; ++j)
                for (Index i = i0; i <= i1; ++i) buckets_[i + j * nb_].push_back(c);
        }
    }

    /// Cell containing p and its barycentric coordinates.
    std::pair<Index, std::array<double, 3>> locate(const Point& p) const {
        const SimplicialMesh& m = *mesh_;
        if (m.dim() == 1) {
            auto it = std::upper_bound(sorted_.begin(), sorted_.end(), std::make_pair(p.x, m.num_cells()));
            const Index c = it == sorted_.begin() ? sorted_.front().second : std::prev(it)->second;
            const auto v = m.cell(c);
            const double x0 = m.vertex(v[0]).x, x1 = m.vertex(v[1]).x;
            const double t = (p.x - x0) / (x1 - x0);
            return {c, {1.0 - t, t, 0.0}};
        }
        const auto [i, j] = bucket(p);
        for (Index c : buckets_[i + j * nb_]) {
            const auto lam = barycentric(c, p);
            if (lam[0] >= -1e-12 && lam[1] >= -1e-12 && lam[2] >= -1e-12) return {c, lam};
        }
        throw InputError("point outside the mesh");
    }

    double evaluate(std::span<const double> U, const Point& p) const {
        const auto [c, lam] = locate(p);
        const auto v = mesh_->cell(c);
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) s += lam[k] * U[v[k]];
        return s;
    }

private:
    std::pair<Index, Index> bucket(const Point& p) const {
        auto idx = [&](double x, double lo, double hi) {
            const double t = hi > lo ? (x - lo) / (hi - lo) : 0.0;
            const auto k = static_cast<long long>(std::floor(t * static_cast<double>(nb_)));
            return static_cast<Index>(std::clamp<long long>(k, 0, static_cast<long long>(nb_) - 1));
        };
        return {idx(p.x, lo_.x, hi_.x), idx(p.y, lo_.y, hi_.y)};
    }

    std::array<double, 3> barycentric(Index c, const Point& p) const {
        const auto v = mesh_->cell(c);
        const Point& a = mesh_->vertex(v[0]);
        const Point& b = mesh_->vertex(v[1]);
        const Point& d = mesh_->vertex(v[2]);
        const double det = (b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y);
        const double l1 = ((p.x - a.x) * (d.y - a.y) - (d.x - a.x) * (p.y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
        return {1.0 - l1 - l2, l1, l2};
    }

    std::shared_ptr<const SimplicialMesh> mesh_;
    Point lo_, hi_;
    std::vector<std::pair<double, Index>> sorted_;
    Index nb_ = 1;
    std::vector<std::vector<Index>> buckets_;
};

/// Nodal values on `fine` of the P1 function U given on `coarse`. Exact when
/// the fine mesh refines the coarse one.
inline std::vector<double> prolongate(std::shared_ptr<const SimplicialMesh> coarse, std::span<const double> U,
                                      const SimplicialMesh& fine) {
    const P1Evaluator eval(std::move(coarse));
    std::vector<double> out(fine.num_vertices());
    for (Index i = 0; i < fine.num_vertices(); ++i) out[i] = eval.evaluate(U, fine.vertex(i));
    return out;
}

/// Norms of U_fine - P U_coarse on the fine mesh (P exact for nested meshes).
/// The maximum is taken over the fine vertices, where it is attained.
inline ErrorNorms nested_error_norms(std::shared_ptr<const SimplicialMesh> coarse, std::span<const double> U_coarse,
                                     std::shared_ptr<const SimplicialMesh> fine, std::span<const double> U_fine) {
    detail::require(U_fine.size() == fine->num_vertices(), "nested_error_norms: wrong vector length");
    const std::vector<double> P = prolongate(std::move(coarse), U_coarse, *fine);
    std::vector<double> e(P.size());
    ErrorNorms err;
    for (Index i = 0; i < e.size(); ++i) {
        e[i] = U_fine[i] - P[i];
        err.linf = std::max(err.linf, std::abs(e[i]));
    }
    const DofMap all = detail::all_free(fine->num_vertices());
    const SparseOperator K = detail::assemble_p1(*fine, all, 1.0, 0.0);
    const SparseOperator M = detail::assemble_p1(*fine, all, 0.0, 1.0);
    err.h1_semi = std::sqrt(std::max(0.0, dot(e, K.apply(e))));
    err.l2 = std::sqrt(std::max(0.0, dot(e, M.apply(e))));
    return err;
}

// ---------------------------------------------------------------------------
// Weak acuteness

struct AcutenessReport {
    bool weakly_acute = true;
    std::vector<std::pair<Index, Index>> violations;  ///< node pairs (i < j) with positive coupling
};

/// True iff every off-diagonal stiffness entry is nonpositive (up to 1e-14).
inline AcutenessReport is_weakly_acute(const SimplicialMesh& mesh) {
    const SparseOperator K = assemble_stiffness_all_nodes(mesh);
    AcutenessReport rep;
    for (Index i = 0; i < K.size(); ++i) {
        const auto cols = K.row_cols(i);
        const auto vals = K.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (cols[k] > i && vals[k] > 1e-14) rep.violations.emplace_back(i, cols[k]);
    }
    rep.weakly_acute = rep.violations.empty();
    return rep;
}

}  // namespace obstakl
