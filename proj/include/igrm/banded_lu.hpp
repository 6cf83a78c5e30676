#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "igrm/banded.hpp"
#include "igrm/errors.hpp"

namespace igrm {

/// Gaussian elimination with partial pivoting restricted to the band.
///
/// Row i keeps columns [i - kl, i + kl + ku]; the extra kl upper diagonals
/// absorb fill from row interchanges. Multipliers stay in the row they were
/// computed for and are never swapped, as in LAPACK's gbtrf.
class BandedLU {
public:
    BandedLU() = default;

    explicit BandedLU(const BandedMatrix& a) : BandedLU(a, a.lower_bandwidth(), a.upper_bandwidth()) {}

    BandedLU(const BandedMatrix& a, int kl, int ku)
    : n_{a.rows()}, kl_{kl}, ku_{ku}, w_{2 * kl + ku + 1},
      lu_(static_cast<std::size_t>(n_) * w_, 0.0), piv_(n_) {
        if (a.rows() != a.cols()) throw dimension_error("banded LU requires a square matrix");
        for (int i = 0; i < n_; ++i) {
            for (int j = a.row_begin(i); j < a.row_end(i); ++j) {
                if (j < i - kl_ || j > i + ku_) {
                    if (a(i, j) != 0.0) throw dimension_error("entry outside declared bandwidth");
                    continue;
                }
                at(i, j) = a(i, j);
            }
        }
        factorize();
    }

    [[nodiscard]] int size() const { return n_; }
    [[nodiscard]] int lower_bandwidth() const { return kl_; }
    [[nodiscard]] int upper_bandwidth() const { return ku_; }

    /// Solves A x = b in place.
    void solve(std::span<double> b) const {
        if (static_cast<int>(b.size()) != n_) throw dimension_error("banded solve: rhs size mismatch");
        std::uint64_t ops = 0;
        for (int k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
            const int last = std::min(n_ - 1, k + kl_);
            const double bk = b[k];
            for (int i = k + 1; i <= last; ++i) b[i] -= at(i, k) * bk;
            ops += 2 * (last - k);
        }
        for (int k = n_ - 1; k >= 0; --k) {
            const int last = std::min(n_ - 1, k + kl_ + ku_);
            double s = b[k];
            for (int j = k + 1; j <= last; ++j) s -= at(k, j) * b[j];
            b[k] = s / at(k, k);
            ops += 2 * (last - k) + 1;
        }
        count_flops(ops);
    }

    /// Dense row-major product of the factors with the interchanges undone,
    /// i.e. the original matrix up to rounding.
    [[nodiscard]] std::vector<double> reconstruct() const {
        std::vector<double> m(static_cast<std::size_t>(n_) * n_, 0.0);
        auto d = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * n_ + j]; };
        for (int i = 0; i < n_; ++i) {
            for (int j = i; j <= std::min(n_ - 1, i + kl_ + ku_); ++j) d(i, j) = at(i, j);
        }
        for (int k = n_ - 1; k >= 0; --k) {
            const int last = std::min(n_ - 1, k + kl_);
            for (int i = k + 1; i <= last; ++i) {
                const double l = at(i, k);
                for (int j = 0; j < n_; ++j) d(i, j) += l * d(k, j);
            }
            if (piv_[k] != k) {
                for (int j = 0; j < n_; ++j) std::swap(d(k, j), d(piv_[k], j));
            }
        }
        return m;
    }

private:
    double& at(int i, int j) { return lu_[static_cast<std::size_t>(i) * w_ + (j - i + kl_)]; }
    [[nodiscard]] double at(int i, int j) const { return lu_[static_cast<std::size_t>(i) * w_ + (j - i + kl_)]; }

    void factorize() {
        std::uint64_t ops = 0;
        for (int k = 0; k < n_; ++k) {
            const int last_row = std::min(n_ - 1, k + kl_);
            const int last_col = std::min(n_ - 1, k + kl_ + ku_);
            int p = k;
            double best = std::abs(at(k, k));
            for (int i = k + 1; i <= last_row; ++i) {
                if (std::abs(at(i, k)) > best) {
                    best = std::abs(at(i, k));
                    p = i;
                }
            }
            if (best == 0.0) throw singular_matrix_error("zero pivot in column " + std::to_string(k));
            piv_[k] = p;
            if (p != k) {
                for (int j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
            }
            const double inv = 1.0 / at(k, k);
            for (int i = k + 1; i <= last_row; ++i) {
                const double l = at(i, k) * inv;
                at(i, k) = l;
                if (l == 0.0) continue;
                for (int j = k + 1; j <= last_col; ++j) at(i, j) -= l * at(k, j);
                ops += 1 + 2 * (last_col - k);
            }
        }
        count_flops(ops);
    }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int w_ = 1;
    std::vector<double> lu_;
    std::vector<int> piv_;
};

/// Convenience wrapper mirroring the factorization entry point.
inline BandedLU lu_banded(const BandedMatrix& m) { return BandedLU(m); }

}  // namespace igrm
