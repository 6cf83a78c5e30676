#pragma once

// Kronecker-structured operations on coefficient grids. A Grid holds values
// indexed (i, j) with i along x and j along y, stored row-major, so vec(G)
// uses the index i * ny + j and (Ax (x) Ay) vec(G) = vec(Ax G Ay^T).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <vector>

#include "igrm/banded.hpp"
#include "igrm/errors.hpp"

namespace igrm {

struct Grid {
    int nx = 0;
    int ny = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(int nx_, int ny_, double fill = 0.0)
    : nx{nx_}, ny{ny_}, values(static_cast<std::size_t>(nx_) * ny_, fill) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }

    [[nodiscard]] std::size_t size() const { return values.size(); }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    [[nodiscard]] bool all_finite() const {
        return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Anything that can solve a square system in place.
template <typename F>
concept LinearFactor = requires(const F& f, std::span<double> b) {
    { f.size() } -> std::convertible_to<int>;
    f.solve(b);
};

/// Applies `op` to every row i of the grid (a vector of length ny), writing rows of length out_ny.
template <typename RowOp>
Grid apply_along_y(const Grid& g, int out_ny, RowOp&& op) {
    Grid out(g.nx, out_ny);
    for (int i = 0; i < g.nx; ++i) {
        std::span<const double> in{g.values.data() + static_cast<std::size_t>(i) * g.ny, static_cast<std::size_t>(g.ny)};
        std::span<double> res{out.values.data() + static_cast<std::size_t>(i) * out_ny, static_cast<std::size_t>(out_ny)};
        op(in, res);
    }
    return out;
}

/// Applies `op` to every column j of the grid (a vector of length nx).
template <typename ColOp>
Grid apply_along_x(const Grid& g, int out_nx, ColOp&& op) {
    Grid out(out_nx, g.ny);
    std::vector<double> in(g.nx), res(out_nx);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) in[i] = g(i, j);
        op(std::span<const double>{in}, std::span<double>{res});
        for (int i = 0; i < out_nx; ++i) out(i, j) = res[i];
    }
    return out;
}

/// (Ax (x) Ay) vec(grid) as two banded sweeps.
inline Grid kron_matvec(const BandedMatrix& ax, const BandedMatrix& ay, const Grid& grid) {
    if (ax.cols() != grid.nx || ay.cols() != grid.ny) throw dimension_error("kron_matvec: grid shape mismatch");
    const Grid tmp = apply_along_y(grid, ay.rows(), [&](auto in, auto out) { ay.multiply(in, out); });
    return apply_along_x(tmp, ax.rows(), [&](auto in, auto out) { ax.multiply(in, out); });
}

/// (Fx (x) Fy)^{-1} vec(rhs): solves along y for every x index, then along x.
template <LinearFactor FX, LinearFactor FY>
Grid kron_solve(const FX& fx, const FY& fy, const Grid& rhs) {
    if (rhs.nx != fx.size() || rhs.ny != fy.size()) throw dimension_error("kron_solve: rhs shape mismatch");
    Grid g = rhs;
    for (int i = 0; i < g.nx; ++i) {
        fy.solve(std::span<double>{g.values.data() + static_cast<std::size_t>(i) * g.ny, static_cast<std::size_t>(g.ny)});
    }
    std::vector<double> col(g.nx);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) col[i] = g(i, j);
        fx.solve(std::span<double>{col});
        for (int i = 0; i < g.nx; ++i) g(i, j) = col[i];
    }
    return g;
}

/// Euclidean inner product of two grids of equal shape.
inline double dot(const Grid& a, const Grid& b) {
    if (a.nx != b.nx || a.ny != b.ny) throw dimension_error("dot: grid shape mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a.values[k] * b.values[k];
    return s;
}

/// a + s * b
inline Grid axpy(const Grid& a, double s, const Grid& b) {
    if (a.nx != b.nx || a.ny != b.ny) throw dimension_error("axpy: grid shape mismatch");
    Grid c = a;
    for (std::size_t k = 0; k < c.size(); ++k) c.values[k] += s * b.values[k];
    return c;
}

/// Identity factor, handy for tests and degenerate directions.
struct IdentityFactor {
    int n = 0;
    [[nodiscard]] int size() const { return n; }
    void solve(std::span<double>) const {}
};

}  // namespace igrm
