#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "igrm/errors.hpp"

namespace igrm {

/// Rectangular banded matrix with a row profile: row i stores a contiguous
/// window of `width` columns starting at first_col(i). Windows may overhang
/// the matrix edge; entries there are never read.
class BandedMatrix {
public:
    BandedMatrix() = default;

    BandedMatrix(int rows, int cols, std::vector<int> first_cols, int width)
    : rows_{rows}, cols_{cols}, width_{width}, first_{std::move(first_cols)},
      data_(static_cast<std::size_t>(rows) * width, 0.0) {
        if (static_cast<int>(first_.size()) != rows) throw dimension_error("row profile size mismatch");
    }

    /// Square matrix with constant lower/upper bandwidths.
    static BandedMatrix with_bandwidths(int n, int lower, int upper) {
        std::vector<int> first(n);
        for (int i = 0; i < n; ++i) first[i] = i - lower;
        return {n, n, std::move(first), lower + upper + 1};
    }

    static BandedMatrix identity(int n) {
        auto m = with_bandwidths(n, 0, 0);
        for (int i = 0; i < n; ++i) m.ref(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }
    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int first_col(int i) const { return first_[i]; }

    [[nodiscard]] int row_begin(int i) const { return std::max(0, first_[i]); }
    [[nodiscard]] int row_end(int i) const { return std::min(cols_, first_[i] + width_); }

    [[nodiscard]] bool in_band(int i, int j) const {
        return i >= 0 && i < rows_ && j >= row_begin(i) && j < row_end(i);
    }

    [[nodiscard]] double operator()(int i, int j) const {
        return in_band(i, j) ? data_[static_cast<std::size_t>(i) * width_ + (j - first_[i])] : 0.0;
    }

    /// Mutable access; (i, j) must lie inside the stored window.
    double& ref(int i, int j) {
        return data_[static_cast<std::size_t>(i) * width_ + (j - first_[i])];
    }

    [[nodiscard]] int lower_bandwidth() const {
        int l = 0;
        for (int i = 0; i < rows_; ++i) l = std::max(l, i - row_begin(i));
        return l;
    }

    [[nodiscard]] int upper_bandwidth() const {
        int u = 0;
        for (int i = 0; i < rows_; ++i) u = std::max(u, row_end(i) - 1 - i);
        return u;
    }

    /// Largest count of structurally nonzero (numerically nonzero) entries in one row.
    [[nodiscard]] int max_row_nonzeros() const {
        int best = 0;
        for (int i = 0; i < rows_; ++i) {
            int c = 0;
            for (int j = row_begin(i); j < row_end(i); ++j) c += (*this)(i, j) != 0.0;
            best = std::max(best, c);
        }
        return best;
    }

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const {
        if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
            throw dimension_error("banded multiply: operand size mismatch");
        }
        for (int i = 0; i < rows_; ++i) {
            const double* row = data_.data() + static_cast<std::size_t>(i) * width_;
            const int f = first_[i];
            double s = 0.0;
            const int jb = row_begin(i), je = row_end(i);
            for (int j = jb; j < je; ++j) s += row[j - f] * x[j];
            y[i] = s;
        }
    }

    [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const {
        std::vector<double> y(rows_);
        multiply(x, y);
        return y;
    }

    [[nodiscard]] BandedMatrix transpose() const {
        std::vector<int> lo(cols_, cols_ > 0 ? rows_ : 0), hi(cols_, -1);
        for (int i = 0; i < rows_; ++i) {
            for (int j = row_begin(i); j < row_end(i); ++j) {
                lo[j] = std::min(lo[j], i);
                hi[j] = std::max(hi[j], i);
            }
        }
        int w = 1;
        for (int j = 0; j < cols_; ++j) {
            if (hi[j] < lo[j]) lo[j] = hi[j] = std::min(j, rows_ - 1);
            w = std::max(w, hi[j] - lo[j] + 1);
        }
        BandedMatrix t(cols_, rows_, lo, w);
        for (int i = 0; i < rows_; ++i) {
            for (int j = row_begin(i); j < row_end(i); ++j) t.ref(j, i) = (*this)(i, j);
        }
        return t;
    }

    /// Dense row-major copy.
    [[nodiscard]] std::vector<double> to_dense() const {
        std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
        for (int i = 0; i < rows_; ++i) {
            for (int j = row_begin(i); j < row_end(i); ++j) d[static_cast<std::size_t>(i) * cols_ + j] = (*this)(i, j);
        }
        return d;
    }

    /// Removes the first `drop_rows_front` rows, the last `drop_rows_back`,
    /// and the analogous columns.
    [[nodiscard]] BandedMatrix submatrix(int drop_rows_front, int drop_rows_back, int drop_cols_front,
                                         int drop_cols_back) const {
        const int nr = rows_ - drop_rows_front - drop_rows_back;
        const int nc = cols_ - drop_cols_front - drop_cols_back;
        if (nr < 0 || nc < 0) throw dimension_error("submatrix: nothing left after elimination");
        std::vector<int> first(nr);
        for (int i = 0; i < nr; ++i) first[i] = first_[i + drop_rows_front] - drop_cols_front;
        BandedMatrix s(nr, nc, std::move(first), width_);
        for (int i = 0; i < nr; ++i) {
            for (int j = s.row_begin(i); j < s.row_end(i); ++j) {
                s.ref(i, j) = (*this)(i + drop_rows_front, j + drop_cols_front);
            }
        }
        return s;
    }

    /// alpha * A + beta * B over the union of both profiles.
    [[nodiscard]] static BandedMatrix combine(double alpha, const BandedMatrix& a, double beta, const BandedMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw dimension_error("combine: shape mismatch");
        std::vector<int> first(a.rows_);
        int w = 1;
        for (int i = 0; i < a.rows_; ++i) {
            const int lo = std::min(a.first_[i], b.first_[i]);
            const int hi = std::max(a.first_[i] + a.width_, b.first_[i] + b.width_);
            first[i] = lo;
            w = std::max(w, hi - lo);
        }
        BandedMatrix c(a.rows_, a.cols_, std::move(first), w);
        for (int i = 0; i < c.rows_; ++i) {
            for (int j = c.row_begin(i); j < c.row_end(i); ++j) c.ref(i, j) = alpha * a(i, j) + beta * b(i, j);
        }
        return c;
    }

    friend BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b) { return combine(1.0, a, 1.0, b); }
    friend BandedMatrix operator-(const BandedMatrix& a, const BandedMatrix& b) { return combine(1.0, a, -1.0, b); }
    friend BandedMatrix operator*(double s, const BandedMatrix& a) {
        BandedMatrix c = a;
        for (auto& v : c.data_) v *= s;
        return c;
    }

    /// Largest |A(i,j) - A(j,i)| relative to the largest entry.
    [[nodiscard]] double asymmetry() const {
        double amax = 0.0, d = 0.0;
        for (int i = 0; i < rows_; ++i) {
            for (int j = row_begin(i); j < row_end(i); ++j) {
                amax = std::max(amax, std::abs((*this)(i, j)));
                d = std::max(d, std::abs((*this)(i, j) - (*this)(j, i)));
            }
        }
        return amax > 0.0 ? d / amax : d;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    int width_ = 0;
    std::vector<int> first_;
    std::vector<double> data_;
};

}  // namespace igrm
