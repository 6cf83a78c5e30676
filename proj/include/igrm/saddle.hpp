#pragma once

// Factorization of the 1D residual-minimization block
//
//     [ A    B ] [r]   [F]
//     [ B^T  0 ] [u] = [G]
//
// with A the (m x m) test Gram matrix and B the (m x n) weak-form block.
// Unknowns are interleaved by their position along the interval so the whole
// block stays banded; within one position the test unknowns come first, so
// elimination sweeps the Gram rows before the trial rows that couple to them.
// Work and storage are linear in m + n.

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "igrm/banded.hpp"
#include "igrm/banded_lu.hpp"

namespace igrm {

class SaddleFactor {
public:
    SaddleFactor() = default;

    SaddleFactor(const BandedMatrix& gram, const BandedMatrix& form)
    : m_{gram.rows()}, n_{form.cols()} {
        if (gram.rows() != gram.cols() || form.rows() != m_) {
            throw dimension_error("saddle: Gram must be m x m and weak form m x n");
        }
        build_ordering(form);

        int kl = 0, ku = 0;
        auto track = [&](int i, int j) {
            kl = std::max(kl, i - j);
            ku = std::max(ku, j - i);
        };
        for (int i = 0; i < m_; ++i) {
            for (int j = gram.row_begin(i); j < gram.row_end(i); ++j) {
                if (gram(i, j) != 0.0) track(pos_[i], pos_[j]);
            }
            for (int j = form.row_begin(i); j < form.row_end(i); ++j) {
                if (form(i, j) != 0.0) {
                    track(pos_[i], pos_[m_ + j]);
                    track(pos_[m_ + j], pos_[i]);
                }
            }
        }
        BandedMatrix block = BandedMatrix::with_bandwidths(m_ + n_, kl, ku);
        for (int i = 0; i < m_; ++i) {
            for (int j = gram.row_begin(i); j < gram.row_end(i); ++j) {
                if (gram(i, j) != 0.0) block.ref(pos_[i], pos_[j]) = gram(i, j);
            }
            for (int j = form.row_begin(i); j < form.row_end(i); ++j) {
                if (form(i, j) != 0.0) {
                    block.ref(pos_[i], pos_[m_ + j]) = form(i, j);
                    block.ref(pos_[m_ + j], pos_[i]) = form(i, j);
                }
            }
        }
        try {
            lu_ = BandedLU(block, kl, ku);
        } catch (const singular_matrix_error& e) {
            throw singular_matrix_error(std::string("saddle block is singular (trial/test pair incompatible): ") +
                                        e.what());
        }
    }

    [[nodiscard]] int test_dim() const { return m_; }
    [[nodiscard]] int trial_dim() const { return n_; }
    [[nodiscard]] int size() const { return m_ + n_; }
    [[nodiscard]] int lower_bandwidth() const { return lu_.lower_bandwidth(); }
    [[nodiscard]] int upper_bandwidth() const { return lu_.upper_bandwidth(); }

    /// Solves in place; b holds [F; G] on entry and [r; u] on exit.
    void solve(std::span<double> b) const {
        if (static_cast<int>(b.size()) != size()) throw dimension_error("saddle solve: rhs size mismatch");
        std::vector<double> work(b.size());
        for (int i = 0; i < size(); ++i) work[pos_[i]] = b[i];
        lu_.solve(work);
        for (int i = 0; i < size(); ++i) b[i] = work[pos_[i]];
    }

private:
    // pos_[natural index] = interleaved index; natural order is [test; trial].
    void build_ordering(const BandedMatrix& form) {
        std::vector<int> mid(m_);
        for (int k = 0; k < m_; ++k) {
            int lo = -1, hi = -1;
            for (int j = form.row_begin(k); j < form.row_end(k); ++j) {
                if (form(k, j) != 0.0) {
                    if (lo < 0) lo = j;
                    hi = j;
                }
            }
            mid[k] = lo < 0 ? (k > 0 ? mid[k - 1] : 0) : (lo + hi) / 2;
        }
        pos_.assign(m_ + n_, 0);
        int next = 0;
        int k = 0;
        for (int i = 0; i < n_; ++i) {
            while (k < m_ && mid[k] <= i) pos_[k++] = next++;
            pos_[m_ + i] = next++;
        }
        while (k < m_) pos_[k++] = next++;
    }

    int m_ = 0;
    int n_ = 0;
    std::vector<int> pos_;
    BandedLU lu_;
};

inline SaddleFactor factorize_saddle(const BandedMatrix& gram, const BandedMatrix& form) {
    return SaddleFactor(gram, form);
}

}  // namespace igrm
