#pragma once

// 1D Galerkin matrices by element-wise Gauss quadrature. Rows index the test
// space and columns the trial space, so every routine also produces the
// rectangular trial-to-test blocks needed by residual minimization.

#include <functional>
#include <string>
#include <utility>

#include "igrm/banded.hpp"
#include "igrm/quadrature.hpp"
#include "igrm/spline.hpp"

namespace igrm {

/// Scalar coefficient of one spatial variable (diffusion or velocity component).
struct Coefficient1D {
    std::function<double(double)> fn;
    bool constant = true;
    double value = 1.0;

    Coefficient1D() = default;
    Coefficient1D(double v) : constant{true}, value{v} {}  // NOLINT: implicit by intent
    explicit Coefficient1D(std::function<double(double)> f) : fn{std::move(f)}, constant{false}, value{0.0} {}

    [[nodiscard]] double operator()(double x) const { return constant ? value : fn(x); }
};

/// Number of Gauss points per element used for a trial/test pair.
inline int quadrature_order(const SplineSpace& trial, const SplineSpace& test) {
    return (trial.degree + test.degree + 1) / 2 + 1;
}

/// Empty matrix whose row profile covers every (test, trial) pair sharing an element.
inline BandedMatrix coupling_pattern(const SplineSpace& trial, const SplineSpace& test) {
    if (!(trial.a == test.a && trial.b == test.b && trial.n_elements == test.n_elements)) {
        throw parameter_error("trial and test spaces must share interval and mesh");
    }
    const int m = test.dim();
    std::vector<int> first(m);
    int width = 1;
    for (int k = 0; k < m; ++k) {
        const auto [lo, hi] = test.support(k);
        first[k] = trial.first_function(lo);
        width = std::max(width, trial.first_function(hi) + trial.degree + 1 - first[k]);
    }
    return {m, trial.dim(), std::move(first), width};
}

enum class FormKind { Mass, Stiffness, Advection };

/// Generic assembly of  int w(x) D^a trial_i(x) D^b test_k(x) dx.
inline BandedMatrix assemble_1d(const SplineSpace& trial, const SplineSpace& test, const Coefficient1D& weight,
                                FormKind kind) {
    BandedMatrix mat = coupling_pattern(trial, test);
    const auto rule = gauss_legendre(quadrature_order(trial, test));
    const double h = trial.element_size();
    for (int e = 0; e < trial.n_elements; ++e) {
        const double x0 = trial.breakpoint(e);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double x = x0 + 0.5 * h * (rule.points[q] + 1.0);
            const double w = 0.5 * h * rule.weights[q] * weight(x);
            const auto bu = eval_on_element(trial, e, x);
            const auto bv = eval_on_element(test, e, x);
            const auto& u = kind == FormKind::Mass ? bu.values : bu.derivatives;
            const auto& v = kind == FormKind::Stiffness ? bv.derivatives : bv.values;
            for (std::size_t a = 0; a < v.size(); ++a) {
                const int k = bv.first_index + static_cast<int>(a);
                for (std::size_t b = 0; b < u.size(); ++b) {
                    const int i = bu.first_index + static_cast<int>(b);
                    mat.ref(k, i) += w * u[b] * v[a];
                }
            }
        }
    }
    return mat;
}

inline BandedMatrix mass(const SplineSpace& trial, const SplineSpace& test, const Coefficient1D& weight = 1.0) {
    return assemble_1d(trial, test, weight, FormKind::Mass);
}

inline BandedMatrix stiffness(const SplineSpace& trial, const SplineSpace& test,
                              const Coefficient1D& diffusion = 1.0) {
    return assemble_1d(trial, test, diffusion, FormKind::Stiffness);
}

inline BandedMatrix advection(const SplineSpace& trial, const SplineSpace& test, const Coefficient1D& velocity = 1.0) {
    return assemble_1d(trial, test, velocity, FormKind::Advection);
}

/// Test-space inner product (u, v) + (u', v') with unit weights.
inline BandedMatrix gram(const SplineSpace& test) { return mass(test, test) + stiffness(test, test); }

/// Homogeneous Dirichlet conditions by elimination of the first and last
/// basis function of both spaces.
inline BandedMatrix apply_dirichlet(const BandedMatrix& matrix, const SplineSpace& space_rows,
                                    const SplineSpace& space_cols) {
    if (matrix.rows() != space_rows.dim() || matrix.cols() != space_cols.dim()) {
        throw dimension_error("apply_dirichlet: matrix does not match the given spaces");
    }
    return matrix.submatrix(1, 1, 1, 1);
}

/// Dimension left after Dirichlet elimination.
inline int interior_dim(const SplineSpace& s) { return s.dim() - 2; }

}  // namespace igrm
