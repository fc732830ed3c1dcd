#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "obstakl/errors.hpp"

namespace obstakl {

struct Triplet {
    Index row;
    Index col;
    double value;
};

/// Square sparse matrix in compressed row storage. Both triangles are stored;
/// symmetric operators are assembled from their upper triangle and mirrored.
class SparseOperator {
public:
    SparseOperator() = default;

    /// Sums duplicate entries in a fixed order, so the result does not depend
    /// on anything but the triplet sequence.
    static SparseOperator from_triplets(Index n, std::vector<Triplet> entries) {
        for (const Triplet& t : entries)
            detail::require(t.row < n && t.col < n, "triplet index out of range");
        std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseOperator op;
        op.n_ = n;
        op.row_ptr_.assign(n + 1, 0);
        for (std::size_t k = 0; k < entries.size();) {
            const Index r = entries[k].row, c = entries[k].col;
            double sum = 0.0;
            while (k < entries.size() && entries[k].row == r && entries[k].col == c)
                sum += entries[k++].value;
            op.cols_.push_back(c);
            op.vals_.push_back(sum);
            ++op.row_ptr_[r + 1];
        }
        for (Index i = 0; i < n; ++i) op.row_ptr_[i + 1] += op.row_ptr_[i];
        op.index_diagonal();
        return op;
    }

    /// Builds a symmetric operator from upper-triangle contributions (row <= col).
    static SparseOperator symmetric_from_upper(Index n, const std::vector<Triplet>& upper) {
        std::vector<Triplet> full;
        full.reserve(2 * upper.size());
        for (const Triplet& t : upper) {
            detail::require(t.row <= t.col, "expected upper-triangle triplet");
            full.push_back(t);
        }
        // Mirror after the upper triangle has been summed so a_ij == a_ji bitwise.
        SparseOperator up = from_triplets(n, std::move(full));
        std::vector<Triplet> mirrored;
        mirrored.reserve(2 * up.nnz());
        for (Index i = 0; i < n; ++i)
            for (Index k = up.row_ptr_[i]; k < up.row_ptr_[i + 1]; ++k) {
                mirrored.push_back({i, up.cols_[k], up.vals_[k]});
                if (up.cols_[k] != i) mirrored.push_back({up.cols_[k], i, up.vals_[k]});
            }
        return from_triplets(n, std::move(mirrored));
    }

    Index size() const { return n_; }
    Index nnz() const { return vals_.size(); }

    std::span<const Index> row_cols(Index i) const {
        return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }
    std::span<const double> row_values(Index i) const {
        return {vals_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }
    const std::vector<Index>& row_ptr() const { return row_ptr_; }
    const std::vector<Index>& col_indices() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }

    double diagonal(Index i) const { return diag_pos_[i] == npos ? 0.0 : vals_[diag_pos_[i]]; }

    double at(Index i, Index j) const {
        const auto cols = row_cols(i);
        auto it = std::lower_bound(cols.begin(), cols.end(), j);
        if (it == cols.end() || *it != j) return 0.0;
        return vals_[row_ptr_[i] + static_cast<Index>(it - cols.begin())];
    }

    void multiply(std::span<const double> x, std::span<double> y) const {
        for (Index i = 0; i < n_; ++i) {
            double s = 0.0;
            for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
            y[i] = s;
        }
    }

    std::vector<double> apply(std::span<const double> x) const {
        detail::require(x.size() == n_, "operator/vector size mismatch");
        std::vector<double> y(n_);
        multiply(x, y);
        return y;
    }

    /// (A x)_i for a single row.
    double row_dot(Index i, std::span<const double> x) const {
        double s = 0.0;
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
        return s;
    }

    bool is_symmetric() const {
        for (Index i = 0; i < n_; ++i)
            for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                if (at(cols_[k], i) != vals_[k]) return false;
        return true;
    }

    /// Same sparsity pattern; rows and columns of masked indices are zeroed
    /// except the diagonal. Used to pin DoFs while keeping the pattern fixed.
    SparseOperator with_pinned(const std::vector<char>& pinned) const {
        SparseOperator out = *this;
        for (Index i = 0; i < n_; ++i)
            for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                const Index j = cols_[k];
                if (i != j && (pinned[i] || pinned[j])) out.vals_[k] = 0.0;
            }
        return out;
    }

    /// Principal submatrix on the sorted index list `keep`.
    SparseOperator principal_submatrix(const std::vector<Index>& keep) const {
        std::vector<Index> map(n_, npos);
        for (Index k = 0; k < keep.size(); ++k) map[keep[k]] = k;
        std::vector<Triplet> t;
        for (Index k = 0; k < keep.size(); ++k) {
            const Index i = keep[k];
            for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
                if (map[cols_[p]] != npos) t.push_back({k, map[cols_[p]], vals_[p]});
        }
        return from_triplets(keep.size(), std::move(t));
    }

    /// Coordinate dump `i j value`, sorted by (i, j).
    void dump(std::ostream& os) const {
        char buf[80];
        for (Index i = 0; i < n_; ++i)
            for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
                std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i, cols_[k], vals_[k]);
                os << buf;
            }
    }

private:
    static constexpr Index npos = static_cast<Index>(-1);

    void index_diagonal() {
        diag_pos_.assign(n_, npos);
        for (Index i = 0; i < n_; ++i)
            for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                if (cols_[k] == i) diag_pos_[i] = k;
    }

    Index n_ = 0;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> cols_;
    std::vector<double> vals_;
    std::vector<Index> diag_pos_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace obstakl
