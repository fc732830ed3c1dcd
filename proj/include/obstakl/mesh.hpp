#pragma once

/// Interval and triangle meshes, graded axial partitions and tensor-product
/// cylinder meshes. All indices are 0-based. Meshes are immutable once built.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "obstakl/errors.hpp"

namespace obstakl {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double area() const { return (x1 - x0) * (y1 - y0); }
};

class SimplicialMesh {
public:
    using Cell = std::array<Index, 3>;

    SimplicialMesh(int dim, std::vector<Point> vertices, std::vector<Cell> cells,
                   std::vector<Index> boundary_nodes)
        : dim_(dim),
          vertices_(std::move(vertices)),
          cells_(std::move(cells)),
          boundary_(std::move(boundary_nodes)) {
        detail::require(dim_ == 1 || dim_ == 2, "mesh dimension must be 1 or 2");
        std::sort(boundary_.begin(), boundary_.end());
        boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
        boundary_mask_.assign(vertices_.size(), 0);
        for (Index b : boundary_) {
            detail::require(b < vertices_.size(), "boundary node index out of range");
            boundary_mask_[b] = 1;
        }
        for (const Cell& c : cells_)
            for (int k = 0; k <= dim_; ++k)
                detail::require(c[k] < vertices_.size(), "cell references a missing vertex");
    }

    int dim() const { return dim_; }
    Index num_vertices() const { return vertices_.size(); }
    Index num_cells() const { return cells_.size(); }
    int nodes_per_cell() const { return dim_ + 1; }

    const Point& vertex(Index i) const { return vertices_[i]; }
    const std::vector<Point>& vertices() const { return vertices_; }
    std::span<const Index> cell(Index c) const {
        return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)};
    }

    const std::vector<Index>& boundary_nodes() const { return boundary_; }
    bool is_boundary(Index i) const { return boundary_mask_[i] != 0; }
    std::vector<Index> interior_nodes() const {
        std::vector<Index> out;
        for (Index i = 0; i < num_vertices(); ++i)
            if (!is_boundary(i)) out.push_back(i);
        return out;
    }

    /// Signed measure: length in 1D, oriented area in 2D.
    double signed_measure(Index c) const {
        const auto v = cell(c);
        if (dim_ == 1) return vertices_[v[1]].x - vertices_[v[0]].x;
        const Point& a = vertices_[v[0]];
        const Point& b = vertices_[v[1]];
        const Point& p = vertices_[v[2]];
        return 0.5 * ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y));
    }
    double cell_measure(Index c) const { return std::abs(signed_measure(c)); }

    /// h_T: diameter of the cell.
    double cell_diameter(Index c) const {
        const auto v = cell(c);
        if (dim_ == 1) return std::abs(vertices_[v[1]].x - vertices_[v[0]].x);
        return std::max({distance(vertices_[v[0]], vertices_[v[1]]),
                         distance(vertices_[v[1]], vertices_[v[2]]),
                         distance(vertices_[v[2]], vertices_[v[0]])});
    }

    /// rho_T: diameter of the largest inscribed ball.
    double cell_inball_diameter(Index c) const {
        if (dim_ == 1) return cell_diameter(c);
        const auto v = cell(c);
        const double perimeter = distance(vertices_[v[0]], vertices_[v[1]]) +
                                 distance(vertices_[v[1]], vertices_[v[2]]) +
                                 distance(vertices_[v[2]], vertices_[v[0]]);
        return 4.0 * cell_measure(c) / perimeter;
    }

    double shape_coefficient(Index c) const { return cell_diameter(c) / cell_inball_diameter(c); }

    double max_h() const {
        double h = 0.0;
        for (Index c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
        return h;
    }

    double measure() const {
        double m = 0.0;
        for (Index c = 0; c < num_cells(); ++c) m += cell_measure(c);
        return m;
    }

    /// Checks conformity (every facet shared by at most two cells, no zero
    /// measure cells) and shape regularity sigma_T <= sigma_max.
    void validate(double sigma_max = 10.0) const {
        std::map<std::pair<Index, Index>, int> facets;
        for (Index c = 0; c < num_cells(); ++c) {
            if (!(cell_measure(c) > 0.0))
                throw InputError("cell " + std::to_string(c) + " has zero measure");
            if (shape_coefficient(c) > sigma_max)
                throw InputError("cell " + std::to_string(c) + " violates shape regularity");
            const auto v = cell(c);
            if (dim_ == 1) {
                ++facets[{v[0], v[0]}];
                ++facets[{v[1], v[1]}];
            } else {
                for (int k = 0; k < 3; ++k) {
                    Index a = v[k], b = v[(k + 1) % 3];
                    if (a > b) std::swap(a, b);
                    ++facets[{a, b}];
                }
            }
        }
        for (const auto& [facet, count] : facets)
            if (count > 2)
                throw InputError("non-conforming mesh: facet shared by " + std::to_string(count) +
                                 " cells");
    }

private:
    int dim_;
    std::vector<Point> vertices_;
    std::vector<Cell> cells_;
    std::vector<Index> boundary_;
    std::vector<char> boundary_mask_;
};

inline SimplicialMesh uniform_interval_mesh(double a, double b, Index n_cells) {
    detail::require(a < b, "interval mesh needs a < b");
    detail::require(n_cells >= 1, "interval mesh needs at least one cell");
    std::vector<Point> vertices(n_cells + 1);
    const double h = (b - a) / static_cast<double>(n_cells);
    for (Index i = 0; i <= n_cells; ++i) vertices[i].x = a + h * static_cast<double>(i);
    vertices[n_cells].x = b;
    std::vector<SimplicialMesh::Cell> cells(n_cells);
    for (Index i = 0; i < n_cells; ++i) cells[i] = {i, i + 1, 0};
    return SimplicialMesh(1, std::move(vertices), std::move(cells), {0, n_cells});
}

/// Right-triangle mesh of a rectangle: n x n sub-rectangles, each cut along the
/// diagonal from its lower-left to its upper-right corner. Every interior edge
/// then has opposite angles summing to at most pi, and consecutive refinements
/// are nested. Vertex (i,j) has index i + j*(n+1).
inline SimplicialMesh structured_triangle_mesh(const Rect& rect, Index n_per_side) {
    detail::require(n_per_side >= 1, "structured mesh needs n_per_side >= 1");
    detail::require(rect.x1 > rect.x0 && rect.y1 > rect.y0, "degenerate rectangle");
    const Index n = n_per_side;
    const Index row = n + 1;
    std::vector<Point> vertices(row * row);
    for (Index j = 0; j <= n; ++j)
        for (Index i = 0; i <= n; ++i) {
            const double tx = static_cast<double>(i) / static_cast<double>(n);
            const double ty = static_cast<double>(j) / static_cast<double>(n);
            vertices[i + j * row] = {rect.x0 + tx * (rect.x1 - rect.x0),
                                     rect.y0 + ty * (rect.y1 - rect.y0)};
        }
    std::vector<SimplicialMesh::Cell> cells;
    cells.reserve(2 * n * n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
            const Index v00 = i + j * row, v10 = v00 + 1, v01 = v00 + row, v11 = v01 + 1;
            cells.push_back({v00, v10, v11});
            cells.push_back({v00, v11, v01});
        }
    std::vector<Index> boundary;
    for (Index j = 0; j <= n; ++j)
        for (Index i = 0; i <= n; ++i)
            if (i == 0 || j == 0 || i == n || j == n) boundary.push_back(i + j * row);
    return SimplicialMesh(2, std::move(vertices), std::move(cells), std::move(boundary));
}

/// Radical partition of [0,Y]: y_k = (k/M)^gamma * Y.
class GradedPartition {
public:
    GradedPartition(double Y, Index M, double gamma) : Y_(Y), M_(M), gamma_(gamma) {
        detail::require(Y > 0.0, "graded partition needs Y > 0");
        detail::require(M >= 1, "graded partition needs M >= 1");
        detail::require(gamma >= 1.0, "graded partition needs gamma >= 1");
        nodes_.resize(M + 1);
        for (Index k = 0; k <= M; ++k)
            nodes_[k] = std::pow(static_cast<double>(k) / static_cast<double>(M), gamma) * Y;
        nodes_[0] = 0.0;
        nodes_[M] = Y;
    }

    double height() const { return Y_; }
    Index intervals() const { return M_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(Index k) const { return nodes_[k]; }
    double interval_length(Index k) const { return nodes_[k + 1] - nodes_[k]; }

    /// sigma_Y: largest ratio between the lengths of neighbouring intervals.
    double neighbor_ratio() const {
        double sigma = 1.0;
        for (Index k = 0; k + 1 < M_; ++k) {
            const double a = interval_length(k), b = interval_length(k + 1);
            sigma = std::max({sigma, b / a, a / b});
        }
        return sigma;
    }

private:
    double Y_;
    Index M_;
    double gamma_;
    std::vector<double> nodes_;
};

inline GradedPartition graded_partition(double Y, Index M, double gamma) {
    return GradedPartition(Y, M, gamma);
}

/// Tensor product of a base mesh of Omega with a graded partition of [0,Y].
/// Node (b, k) has index b + k * (#base vertices), so the trace plane y = 0
/// occupies the first #base vertices indices.
class CylinderMesh {
public:
    CylinderMesh(std::shared_ptr<const SimplicialMesh> base, GradedPartition axial)
        : base_(std::move(base)), axial_(std::move(axial)) {
        detail::require(base_ != nullptr, "cylinder mesh needs a base mesh");
    }

    const SimplicialMesh& base() const { return *base_; }
    std::shared_ptr<const SimplicialMesh> base_ptr() const { return base_; }
    const GradedPartition& axial() const { return axial_; }

    Index num_base_vertices() const { return base_->num_vertices(); }
    Index num_levels() const { return axial_.intervals() + 1; }
    Index num_nodes() const { return num_base_vertices() * num_levels(); }
    Index num_cells() const { return base_->num_cells() * axial_.intervals(); }

    Index node(Index base_vertex, Index level) const {
        return base_vertex + level * num_base_vertices();
    }
    Index base_of(Index node) const { return node % num_base_vertices(); }
    Index level_of(Index node) const { return node / num_base_vertices(); }

    /// Gamma_D = (boundary of Omega) x [0,Y]  union  Omega x {Y}.
    bool is_dirichlet(Index node) const {
        return base_->is_boundary(base_of(node)) || level_of(node) == axial_.intervals();
    }
    bool on_trace_plane(Index node) const { return level_of(node) == 0; }

private:
    std::shared_ptr<const SimplicialMesh> base_;
    GradedPartition axial_;
};

// ---------------------------------------------------------------------------
// OBSMESH v1 text format

inline void write_obsmesh(std::ostream& os, const SimplicialMesh& mesh) {
    char buf[96];
    os << "OBSMESH v1\n";
    os << "vertices " << mesh.num_vertices() << "\n";
    for (const Point& p : mesh.vertices()) {
        if (mesh.dim() == 1)
            std::snprintf(buf, sizeof buf, "%.17g\n", p.x);
        else
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        os << buf;
    }
    os << "cells " << mesh.num_cells() << "\n";
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const auto v = mesh.cell(c);
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << v[k];
        os << "\n";
    }
    os << "boundary " << mesh.boundary_nodes().size() << "\n";
    for (Index b : mesh.boundary_nodes()) os << b << "\n";
}

inline SimplicialMesh read_obsmesh(std::istream& is) {
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(is, line)) throw InputError(std::string("OBSMESH: missing ") + what);
    };
    auto count_after = [&](const std::string& key) {
        next_line(key.c_str());
        std::istringstream ss(line);
        std::string word;
        Index n = 0;
        if (!(ss >> word >> n) || word != key) throw InputError("OBSMESH: expected '" + key + " N'");
        return n;
    };
    next_line("header");
    if (line != "OBSMESH v1") throw InputError("OBSMESH: bad header '" + line + "'");
    const Index nv = count_after("vertices");
    std::vector<Point> vertices(nv);
    int dim = 0;
    for (Index i = 0; i < nv; ++i) {
        next_line("vertex");
        std::istringstream ss(line);
        std::vector<double> coords;
        double v;
        while (ss >> v) coords.push_back(v);
        if (coords.empty() || coords.size() > 2) throw InputError("OBSMESH: bad vertex line");
        const int d = static_cast<int>(coords.size());
        if (dim == 0) dim = d;
        if (d != dim) throw InputError("OBSMESH: inconsistent vertex dimension");
        vertices[i] = {coords[0], d == 2 ? coords[1] : 0.0};
    }
    if (dim == 0) dim = 1;
    const Index nc = count_after("cells");
    std::vector<SimplicialMesh::Cell> cells(nc);
    for (Index c = 0; c < nc; ++c) {
        next_line("cell");
        std::istringstream ss(line);
        SimplicialMesh::Cell cell{0, 0, 0};
        for (int k = 0; k <= dim; ++k)
            if (!(ss >> cell[k])) throw InputError("OBSMESH: bad cell line");
        cells[c] = cell;
    }
    const Index nb = count_after("boundary");
    std::vector<Index> boundary(nb);
    for (Index b = 0; b < nb; ++b) {
        next_line("boundary index");
        std::istringstream ss(line);
        if (!(ss >> boundary[b])) throw InputError("OBSMESH: bad boundary line");
    }
    return SimplicialMesh(dim, std::move(vertices), std::move(cells), std::move(boundary));
}

}  // namespace obstakl
