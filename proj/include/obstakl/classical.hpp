#pragma once

/// Classical obstacle problem: benchmarks with exact solutions, the discrete
/// solve, discrete free boundaries {U > delta} and interface metrics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "obstakl/assembly.hpp"
#include "obstakl/errors.hpp"
#include "obstakl/mesh.hpp"
#include "obstakl/vi_solver.hpp"

namespace obstakl {

using Interval = std::pair<double, double>;

struct ClassicalBenchmark {
    std::string name;
    int dim = 1;
    Rect domain;  ///< 1D uses [x0, x1]
    ScalarField exact_u;
    VectorField exact_grad;
    ScalarField minus_laplacian;  ///< -Laplace(u), piecewise analytic
    ScalarField f;
    ScalarField psi;
    double w2inf_seminorm = 0.0;  ///< |u|_{W^2_inf}
    /// Distance from a point to the exact free boundary.
    ScalarField distance_to_free_boundary;
    /// 1D only: exact free boundary points and the non-coincidence set.
    std::vector<double> free_boundary_points;
    std::vector<Interval> positive_set;

    double domain_measure() const { return dim == 1 ? domain.x1 - domain.x0 : domain.area(); }

    /// Distance from p to the outer boundary of the domain.
    double distance_to_domain_boundary(const Point& p) const {
        if (dim == 1) return std::min(p.x - domain.x0, domain.x1 - p.x);
        return std::min({p.x - domain.x0, domain.x1 - p.x, p.y - domain.y0, domain.y1 - p.y});
    }
};

/// Omega = (0,1), psi = 0, u = 16 (x-1/4)^2 (3/4-x)^2 on (1/4,3/4) and 0
/// elsewhere; f = -u'' where u > 0 and f = -1 on the contact set.
inline ClassicalBenchmark benchmark_1d() {
    ClassicalBenchmark b;
    b.name = "classical1d";
    b.dim = 1;
    b.domain = {0.0, 0.0, 1.0, 0.0};
    auto inside = [](double x) { return x > 0.25 && x < 0.75; };
    b.exact_u = [inside](const Point& p) {
        const double x = p.x;
        if (!inside(x)) return 0.0;
        const double a = x - 0.25, c = 0.75 - x;
        return 16.0 * a * a * c * c;
    };
    b.exact_grad = [inside](const Point& p) {
        const double x = p.x;
        if (!inside(x)) return Point{0.0, 0.0};
        return Point{32.0 * (x - 0.25) * (0.75 - x) * (1.0 - 2.0 * x), 0.0};
    };
    b.minus_laplacian = [inside](const Point& p) {
        const double x = p.x;
        if (!inside(x)) return 0.0;
        const double a = x - 0.25, c = 0.75 - x;
        return -16.0 * (2.0 * c * c - 8.0 * a * c + 2.0 * a * a);
    };
    const ScalarField mlap = b.minus_laplacian;
    b.f = [inside, mlap](const Point& p) { return inside(p.x) ? mlap(p) : -1.0; };
    b.psi = [](const Point&) { return 0.0; };
    b.w2inf_seminorm = 8.0;
    b.free_boundary_points = {0.25, 0.75};
    b.positive_set = {{0.25, 0.75}};
    b.distance_to_free_boundary = [](const Point& p) {
        return std::min(std::abs(p.x - 0.25), std::abs(p.x - 0.75));
    };
    return b;
}

/// Radius of the non-coincidence disk of the 2D benchmark.
inline constexpr double kBenchmark2dRadius = 0.35;

/// Omega = (0,1)^2, psi = 0, u = (R^2 - r^2)^2 / R^2 inside the disk r < R
/// around the centre and 0 outside. Then f = -Laplace(u) = 8 (1 - 2 r^2/R^2)
/// inside and f = -8 on the contact set, so f is continuous and strictly
/// negative in a neighbourhood of the free boundary r = R.
inline ClassicalBenchmark benchmark_2d() {
    ClassicalBenchmark b;
    b.name = "classical2d";
    b.dim = 2;
    b.domain = {0.0, 0.0, 1.0, 1.0};
    constexpr double R = kBenchmark2dRadius, R2 = R * R;
    auto r2 = [](const Point& p) { return (p.x - 0.5) * (p.x - 0.5) + (p.y - 0.5) * (p.y - 0.5); };
    b.exact_u = [r2](const Point& p) {
        const double d = R2 - r2(p);
        return d > 0.0 ? d * d / R2 : 0.0;
    };
    b.exact_grad = [r2](const Point& p) {
        const double d = R2 - r2(p);
        if (d <= 0.0) return Point{0.0, 0.0};
        return Point{-4.0 * d / R2 * (p.x - 0.5), -4.0 * d / R2 * (p.y - 0.5)};
    };
    b.minus_laplacian = [r2](const Point& p) {
        const double q = r2(p);
        return q < R2 ? 8.0 * (1.0 - 2.0 * q / R2) : 0.0;
    };
    b.f = [r2](const Point& p) { return std::max(8.0 * (1.0 - 2.0 * r2(p) / R2), -8.0); };
    b.psi = [](const Point&) { return 0.0; };
    b.w2inf_seminorm = 8.0;
    b.distance_to_free_boundary = [r2](const Point& p) { return std::abs(std::sqrt(r2(p)) - R); };
    return b;
}

struct ClassicalSolution {
    FeSpace space;
    ObstacleSystem system;
    ViSolution vi;
    std::vector<double> U;  ///< nodal values on all vertices
};

inline std::shared_ptr<const SimplicialMesh> classical_mesh(const ClassicalBenchmark& bench, Index n) {
    if (bench.dim == 1)
        return std::make_shared<const SimplicialMesh>(uniform_interval_mesh(bench.domain.x0, bench.domain.x1, n));
    return std::make_shared<const SimplicialMesh>(structured_triangle_mesh(bench.domain, n));
}

/// Assembles the discrete VI on every interior node (obstacle interpolated
/// nodally) and solves it.
inline ClassicalSolution solve_classical(const ClassicalBenchmark& bench, Index n, const SolverOptions& solver) {
    ClassicalSolution s;
    s.space = make_dirichlet_space(classical_mesh(bench, n));
    const DofMap& dofs = s.space.dofs;
    const std::vector<double> psi_nodal = interpolate_nodal(s.space, bench.psi);
    std::vector<Index> constrained;
    std::vector<double> psi_values;
    for (Index node : dofs.trace_dofs) {
        constrained.push_back(dofs.free_index[node]);
        psi_values.push_back(psi_nodal[node]);
    }
    s.system = ObstacleSystem(assemble_stiffness(s.space), assemble_load(s.space, bench.f), std::move(constrained),
                              psi_values);
    s.vi = solve_obstacle(s.system, solver);
    s.U = dofs.expand(s.vi.U);
    return s;
}

// ---------------------------------------------------------------------------
// Free boundaries

struct Segment {
    Point a, b;
};

struct FreeBoundaryEstimate {
    double delta = 0.0;
    std::shared_ptr<const SimplicialMesh> mesh;
    std::vector<double> U;
    std::vector<Index> omega_plus_cells;  ///< cells where U > delta somewhere
    double omega_plus_measure = 0.0;      ///< exact for the piecewise linear U
    std::vector<Interval> omega_plus_intervals;  ///< 1D: merged components of {U > delta}
    std::vector<Point> gamma_points;             ///< 1D crossings, 2D segment end points
    std::vector<Segment> gamma_segments;         ///< 2D pieces of {U = delta}
};

namespace detail {

/// Area of {x in triangle : l(x) > 0} for l linear with nodal values d.
inline double positive_area(const std::array<double, 3>& d, double area) {
    int npos = 0;
    for (double x : d) npos += x > 0.0 ? 1 : 0;
    if (npos == 0) return 0.0;
    if (npos == 3) return area;
    // Sub-triangle cut off at the lone vertex has area fraction t1 * t2.
    const bool lone_positive = npos == 1;
    int lone = 0;
    for (int k = 0; k < 3; ++k)
        if ((d[k] > 0.0) == lone_positive) lone = k;
    const double dl = d[lone];
    const double t1 = dl / (dl - d[(lone + 1) % 3]);
    const double t2 = dl / (dl - d[(lone + 2) % 3]);
    const double corner = t1 * t2 * area;
    return lone_positive ? corner : area - corner;
}

}  // namespace detail

/// Omega+_T = {U > delta} and Gamma_T = boundary of Omega+_T inside Omega.
inline FreeBoundaryEstimate extract_free_boundary(const FeSpace& space, std::span<const double> U, double delta) {
    detail::require(delta >= 0.0, "free-boundary threshold must be nonnegative");
    const SimplicialMesh& mesh = *space.mesh;
    detail::require(U.size() == mesh.num_vertices(), "extract_free_boundary: wrong vector length");
    FreeBoundaryEstimate est;
    est.delta = delta;
    est.mesh = space.mesh;
    est.U.assign(U.begin(), U.end());
    if (mesh.dim() == 1) {
        std::vector<Interval> pieces;
        for (Index c = 0; c < mesh.num_cells(); ++c) {
            const auto v = mesh.cell(c);
            double x0 = mesh.vertex(v[0]).x, x1 = mesh.vertex(v[1]).x;
            double d0 = U[v[0]] - delta, d1 = U[v[1]] - delta;
            if (x0 > x1) {
                std::swap(x0, x1);
                std::swap(d0, d1);
            }
            if (d0 <= 0.0 && d1 <= 0.0) continue;
            est.omega_plus_cells.push_back(c);
            double lo = x0, hi = x1;
            if (d0 <= 0.0) lo = x0 + (x1 - x0) * d0 / (d0 - d1);
            if (d1 <= 0.0) hi = x0 + (x1 - x0) * d0 / (d0 - d1);
            pieces.emplace_back(lo, hi);
        }
        std::sort(pieces.begin(), pieces.end());
        for (const Interval& p : pieces) {
            if (!est.omega_plus_intervals.empty() && p.first <= est.omega_plus_intervals.back().second)
                est.omega_plus_intervals.back().second = std::max(est.omega_plus_intervals.back().second, p.second);
            else
                est.omega_plus_intervals.push_back(p);
        }
        const double a = mesh.vertex(0).x, b = mesh.vertex(mesh.num_vertices() - 1).x;
        const double xmin = std::min(a, b), xmax = std::max(a, b);
        for (const Interval& iv : est.omega_plus_intervals) {
            est.omega_plus_measure += iv.second - iv.first;
            if (iv.first > xmin) est.gamma_points.push_back({iv.first, 0.0});
            if (iv.second < xmax) est.gamma_points.push_back({iv.second, 0.0});
        }
        return est;
    }
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto v = mesh.cell(c);
        const std::array<Point, 3> p{mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])};
        const std::array<double, 3> d{U[v[0]] - delta, U[v[1]] - delta, U[v[2]] - delta};
        const double part = detail::positive_area(d, mesh.cell_measure(c));
        if (part > 0.0) est.omega_plus_cells.push_back(c);
        est.omega_plus_measure += part;
        // Crossings of {U = delta} on the three edges.
        std::vector<std::pair<Point, bool>> crossings;  // point, at a boundary node
        for (int k = 0; k < 3; ++k) {
            const int i = k, j = (k + 1) % 3;
            if ((d[i] > 0.0) == (d[j] > 0.0)) continue;
            const double t = d[i] / (d[i] - d[j]);
            const Point x{p[i].x + t * (p[j].x - p[i].x), p[i].y + t * (p[j].y - p[i].y)};
            const bool at_boundary_node = (t == 0.0 && mesh.is_boundary(v[i])) || (t == 1.0 && mesh.is_boundary(v[j]));
            crossings.emplace_back(x, at_boundary_node);
        }
        if (crossings.size() == 2 && !(crossings[0].second && crossings[1].second)) {
            est.gamma_segments.push_back({crossings[0].first, crossings[1].first});
            est.gamma_points.push_back(crossings[0].first);
            est.gamma_points.push_back(crossings[1].first);
        }
    }
    return est;
}

struct InterfaceMetrics {
    double sym_diff_measure = 0.0;  ///< |(Omega+ sym.diff. Omega+_T) cap K|
    double sup_distance = 0.0;      ///< sup over Gamma_T cap K of dist(., Gamma)
    Index points_checked = 0;
};

namespace detail {

inline double measure_of_intersection(const std::vector<Interval>& A, const std::vector<Interval>& B) {
    double m = 0.0;
    for (const Interval& a : A)
        for (const Interval& b : B) m += std::max(0.0, std::min(a.second, b.second) - std::max(a.first, b.first));
    return m;
}

inline std::vector<Interval> clip(const std::vector<Interval>& A, const Interval& K) {
    std::vector<Interval> out;
    for (const Interval& a : A) {
        const double lo = std::max(a.first, K.first), hi = std::min(a.second, K.second);
        if (hi > lo) out.emplace_back(lo, hi);
    }
    return out;
}

}  // namespace detail

/// Interface errors restricted to K = {x : dist(x, boundary of Omega) >= margin}.
/// In 1D the symmetric difference is exact interval arithmetic; in 2D it is
/// a cell-wise sampling with at least 1e4 points in total.
inline InterfaceMetrics interface_metrics(const FreeBoundaryEstimate& est, const ClassicalBenchmark& bench,
                                          double margin) {
    InterfaceMetrics m;
    const SimplicialMesh& mesh = *est.mesh;
    if (bench.dim == 1) {
        const Interval K{bench.domain.x0 + margin, bench.domain.x1 - margin};
        const auto A = detail::clip(bench.positive_set, K);
        const auto B = detail::clip(est.omega_plus_intervals, K);
        double ma = 0.0, mb = 0.0;
        for (const Interval& a : A) ma += a.second - a.first;
        for (const Interval& b : B) mb += b.second - b.first;
        m.sym_diff_measure = std::max(0.0, ma + mb - 2.0 * detail::measure_of_intersection(A, B));
    } else {
        const Index cells = mesh.num_cells();
        Index sub = 8;
        while (sub * sub * cells < 10000) sub *= 2;
        double sym = 0.0;
        for (Index c = 0; c < cells; ++c) {
            const auto v = mesh.cell(c);
            const double w = mesh.cell_measure(c) / static_cast<double>(sub * sub);
            // Centroids of the sub*sub congruent sub-triangles.
            for (Index i = 0; i < sub; ++i)
                for (Index j = 0; i + j < sub; ++j) {
                    const double s = static_cast<double>(sub);
                    std::vector<std::array<double, 2>> pts{{(i + 1.0 / 3.0) / s, (j + 1.0 / 3.0) / s}};
                    if (i + j + 1 < sub) pts.push_back({(i + 2.0 / 3.0) / s, (j + 2.0 / 3.0) / s});
                    for (const auto& [l1, l2] : pts) {
                        const double l0 = 1.0 - l1 - l2;
                        const Point& a = mesh.vertex(v[0]);
                        const Point& b = mesh.vertex(v[1]);
                        const Point& d = mesh.vertex(v[2]);
                        const Point x{l0 * a.x + l1 * b.x + l2 * d.x, l0 * a.y + l1 * b.y + l2 * d.y};
                        if (bench.distance_to_domain_boundary(x) < margin) continue;
                        const double uh = l0 * est.U[v[0]] + l1 * est.U[v[1]] + l2 * est.U[v[2]];
                        const bool in_exact = bench.exact_u(x) > bench.psi(x);
                        const bool in_discrete = uh > est.delta;
                        if (in_exact != in_discrete) sym += w;
                    }
                }
        }
        m.sym_diff_measure = sym;
    }
    auto consider = [&](const Point& x) {
        if (bench.distance_to_domain_boundary(x) < margin) return;
        m.sup_distance = std::max(m.sup_distance, bench.distance_to_free_boundary(x));
        ++m.points_checked;
    };
    if (bench.dim == 1) {
        for (const Point& x : est.gamma_points) consider(x);
    } else {
        for (const Segment& s : est.gamma_segments)
            for (int k = 0; k <= 8; ++k) {
                const double t = k / 8.0;
                consider({s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)});
            }
    }
    return m;
}

/// eta(h) scaled by c_star:  c_star * h^2 |log h| * |u|_{W^2_inf}.
inline double delta_for_level(double h, double c_star, double w2inf) {
    detail::require(h > 0.0 && h < 1.0, "delta_for_level needs 0 < h < 1");
    return c_star * h * h * std::abs(std::log(h)) * w2inf;
}

/// Smallest c = 2^k (k >= 0) with linf_errors[i] < c * etas[i] for every i.
inline double calibrate_c_star(const std::vector<double>& linf_errors, const std::vector<double>& etas) {
    detail::require(linf_errors.size() == etas.size() && !etas.empty(), "calibrate_c_star: size mismatch");
    double c = 1.0;
    for (int k = 0; k < 64; ++k, c *= 2.0) {
        bool ok = true;
        for (std::size_t i = 0; i < etas.size(); ++i) ok = ok && linf_errors[i] < c * etas[i];
        if (ok) return c;
    }
    throw InputError("calibrate_c_star: no power of two bounds the errors");
}

/// Largest value of (u - psi) / h^2 over the cells that touch the exact
/// coincidence set, sampled densely per cell.
inline double contact_growth_constant(const ClassicalBenchmark& bench, const SimplicialMesh& mesh) {
    double C = 0.0;
    constexpr int kSamples = 64;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const P1Element e = p1_element(mesh, c);
        const double h = mesh.cell_diameter(c);
        double gap_min = 1e300, gap_max = 0.0;
        for (int i = 0; i <= kSamples; ++i)
            for (int j = 0; j <= (bench.dim == 1 ? 0 : kSamples - i); ++j) {
                const double l1 = static_cast<double>(i) / kSamples, l2 = static_cast<double>(j) / kSamples;
                const QuadPoint q{{1.0 - l1 - l2, l1, l2}, 0.0};
                const Point x = map_to_cell(mesh, e, q);
                const double gap = bench.exact_u(x) - bench.psi(x);
                gap_min = std::min(gap_min, gap);
                gap_max = std::max(gap_max, gap);
            }
        if (gap_min <= 0.0) C = std::max(C, gap_max / (h * h));
    }
    return C;
}

}  // namespace obstakl
