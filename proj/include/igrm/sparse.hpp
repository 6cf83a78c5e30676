#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "igrm/errors.hpp"

namespace igrm {

/// Compressed sparse row matrix with sorted column indices per row.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> values;

    struct Triplet {
        int row;
        int col;
        double value;
    };

    /// Builds the matrix summing duplicate entries.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const Triplet& a, const Triplet& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
        SparseMatrix m;
        m.rows = rows;
        m.cols = cols;
        m.row_ptr.assign(rows + 1, 0);
        for (std::size_t k = 0; k < entries.size();) {
            const auto& e = entries[k];
            if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols) {
                throw dimension_error("sparse entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                                      ") out of range");
            }
            double v = 0.0;
            std::size_t l = k;
            while (l < entries.size() && entries[l].row == e.row && entries[l].col == e.col) v += entries[l++].value;
            m.col_idx.push_back(e.col);
            m.values.push_back(v);
            ++m.row_ptr[e.row + 1];
            k = l;
        }
        std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
        return m;
    }

    [[nodiscard]] std::size_t nonzeros() const { return values.size(); }

    [[nodiscard]] double operator()(int i, int j) const {
        const auto b = col_idx.begin() + row_ptr[i];
        const auto e = col_idx.begin() + row_ptr[i + 1];
        const auto it = std::lower_bound(b, e, j);
        return it != e && *it == j ? values[it - col_idx.begin()] : 0.0;
    }

    void multiply(std::span<const double> x, std::span<double> y) const {
        if (static_cast<int>(x.size()) != cols || static_cast<int>(y.size()) != rows) {
            throw dimension_error("sparse multiply: operand size mismatch");
        }
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
            y[i] = s;
        }
    }

    [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const {
        std::vector<double> y(rows);
        multiply(x, y);
        return y;
    }

    [[nodiscard]] std::vector<double> to_dense() const {
        std::vector<double> d(static_cast<std::size_t>(rows) * cols, 0.0);
        for (int i = 0; i < rows; ++i) {
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) d[static_cast<std::size_t>(i) * cols + col_idx[k]] = values[k];
        }
        return d;
    }

    [[nodiscard]] bool structurally_symmetric() const {
        for (int i = 0; i < rows; ++i) {
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
                const int j = col_idx[k];
                const auto b = col_idx.begin() + row_ptr[j];
                const auto e = col_idx.begin() + row_ptr[j + 1];
                if (!std::binary_search(b, e, i)) return false;
            }
        }
        return true;
    }
};

/// Sparse LU with a fill-reducing column ordering.
class SparseLU {
public:
    explicit SparseLU(const SparseMatrix& a) : n_{a.rows} {
        if (a.rows != a.cols) throw dimension_error("sparse LU requires a square matrix");
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(a.nonzeros());
        for (int i = 0; i < a.rows; ++i) {
            for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) t.emplace_back(i, a.col_idx[k], a.values[k]);
        }
        Eigen::SparseMatrix<double> m(a.rows, a.cols);
        m.setFromTriplets(t.begin(), t.end());
        m.makeCompressed();
        lu_.analyzePattern(m);
        lu_.factorize(m);
        if (lu_.info() != Eigen::Success) throw singular_matrix_error("sparse LU failed: " + lu_.lastErrorMessage());
    }

    SparseLU(const SparseLU&) = delete;
    SparseLU& operator=(const SparseLU&) = delete;

    [[nodiscard]] int size() const { return n_; }

    void solve(std::span<double> b) const {
        if (static_cast<int>(b.size()) != n_) throw dimension_error("sparse solve: rhs size mismatch");
        Eigen::Map<Eigen::VectorXd> v(b.data(), n_);
        Eigen::VectorXd x = lu_.solve(v);
        v = x;
    }

private:
    int n_ = 0;
    // Eigen's solve is logically const but not marked so.
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

inline std::vector<double> sparse_lu_solve(const SparseMatrix& m, std::vector<double> rhs) {
    const SparseLU lu(m);
    lu.solve(rhs);
    return rhs;
}

}  // namespace igrm
