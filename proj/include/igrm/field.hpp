#pragma once

// Tensor-product spline fields on Dirichlet-eliminated spaces: point
// evaluation, load vectors and L2 projection.

#include <array>
#include <functional>
#include <vector>

#include "igrm/assembly.hpp"
#include "igrm/banded_lu.hpp"
#include "igrm/kron.hpp"
#include "igrm/quadrature.hpp"
#include "igrm/spline.hpp"

namespace igrm {

/// Value and gradient of a 2D field.
struct FieldValue {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

/// Evaluates sum_ij c(i,j) B_i(x) B_j(y). The grid holds either interior
/// coefficients (boundary functions carry zero by the Dirichlet condition)
/// or the full coefficient set of sx (x) sy.
inline FieldValue evaluate(const Grid& coef, const SplineSpace& sx, const SplineSpace& sy, const BasisEval& bx,
                           const BasisEval& by) {
    const int ox = coef.nx == sx.dim() ? 0 : 1;
    const int oy = coef.ny == sy.dim() ? 0 : 1;
    FieldValue f;
    for (std::size_t a = 0; a < bx.values.size(); ++a) {
        const int i = bx.first_index + static_cast<int>(a) - ox;
        if (i < 0 || i >= coef.nx) continue;
        for (std::size_t b = 0; b < by.values.size(); ++b) {
            const int j = by.first_index + static_cast<int>(b) - oy;
            if (j < 0 || j >= coef.ny) continue;
            const double c = coef(i, j);
            f.value += c * bx.values[a] * by.values[b];
            f.dx += c * bx.derivatives[a] * by.values[b];
            f.dy += c * bx.values[a] * by.derivatives[b];
        }
    }
    return f;
}

inline FieldValue evaluate(const Grid& coef, const SplineSpace& sx, const SplineSpace& sy, double x, double y) {
    return evaluate(coef, sx, sy, eval(sx, x), eval(sy, y));
}

/// Basis values at the Gauss points of every element, cached per direction.
struct ElementQuadrature {
    std::vector<double> points;   // [element * nq + q]
    std::vector<double> weights;  // physical weights
    std::vector<BasisEval> basis;
    int nq = 0;

    ElementQuadrature(const SplineSpace& s, int n_points) : nq{n_points} {
        const auto rule = gauss_legendre(n_points);
        const double h = s.element_size();
        for (int e = 0; e < s.n_elements; ++e) {
            for (int q = 0; q < n_points; ++q) {
                const double x = s.breakpoint(e) + 0.5 * h * (rule.points[q] + 1.0);
                points.push_back(x);
                weights.push_back(0.5 * h * rule.weights[q]);
                basis.push_back(eval_on_element(s, e, x));
            }
        }
    }
};

/// Load vector  int f(x, y) B_i(x) B_j(y)  over the interior functions of sx (x) sy.
inline Grid assemble_load(const SplineSpace& sx, const SplineSpace& sy, const std::function<double(double, double)>& f,
                          int extra_points = 2) {
    const ElementQuadrature qx(sx, sx.degree + extra_points);
    const ElementQuadrature qy(sy, sy.degree + extra_points);
    Grid load(sx.dim() - 2, sy.dim() - 2);
    for (std::size_t a = 0; a < qx.points.size(); ++a) {
        const auto& bx = qx.basis[a];
        for (std::size_t b = 0; b < qy.points.size(); ++b) {
            const auto& by = qy.basis[b];
            const double w = qx.weights[a] * qy.weights[b] * f(qx.points[a], qy.points[b]);
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < bx.values.size(); ++k) {
                const int i = bx.first_index + static_cast<int>(k) - 1;
                if (i < 0 || i >= load.nx) continue;
                const double wx = w * bx.values[k];
                for (std::size_t l = 0; l < by.values.size(); ++l) {
                    const int j = by.first_index + static_cast<int>(l) - 1;
                    if (j < 0 || j >= load.ny) continue;
                    load(i, j) += wx * by.values[l];
                }
            }
        }
    }
    return load;
}

/// L2 projection onto the interior spline space: (Mx (x) My) u = load(u0).
inline Grid project(const std::function<double(double, double)>& u0, const SplineSpace& sx, const SplineSpace& sy) {
    const BandedLU mx(apply_dirichlet(mass(sx, sx), sx, sx));
    const BandedLU my(apply_dirichlet(mass(sy, sy), sy, sy));
    return kron_solve(mx, my, assemble_load(sx, sy, u0));
}

/// Samples the field on a uniform resolution x resolution point lattice
/// including the domain corners.
inline Grid sample(const Grid& coef, const SplineSpace& sx, const SplineSpace& sy, int resolution) {
    if (resolution < 2) throw parameter_error("sampling resolution must be at least 2");
    Grid out(resolution, resolution);
    const int last = resolution - 1;
    for (int i = 0; i < resolution; ++i) {
        const double x = i == last ? sx.b : sx.a + (sx.b - sx.a) * i / last;
        const auto bx = eval(sx, x);
        for (int j = 0; j < resolution; ++j) {
            const double y = j == last ? sy.b : sy.a + (sy.b - sy.a) * j / last;
            out(i, j) = evaluate(coef, sx, sy, bx, eval(sy, y)).value;
        }
    }
    return out;
}

}  // namespace igrm
