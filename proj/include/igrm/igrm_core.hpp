#pragma once

// One direction-split residual-minimization substep.
//
// For a substep with derivatives along the split direction s, the discrete
// problem is the saddle system
//
//     [ A_s (x) M_o   B_s (x) M_o ] [r]   [l]
//     [ B_s^T (x) M_o      0      ] [u] = [0]
//
// where A_s = M + K is the test Gram matrix in s (the inner product carries
// the derivative in the split direction only), B_s = M + dt (eps K + G) maps
// trial to test in s, and M_o is the trial mass in the orthogonal direction.
// The block therefore factors as ([[A_s, B_s], [B_s^T, 0]]) (x) M_o and is
// solved by two banded sweeps.
//
// With this sign convention r is the Riesz representative of l - B u.

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "igrm/assembly.hpp"
#include "igrm/banded_lu.hpp"
#include "igrm/field.hpp"
#include "igrm/kron.hpp"
#include "igrm/saddle.hpp"
#include "igrm/spline.hpp"

namespace igrm {

enum class Direction { X, Y };

inline const char* to_string(Direction d) { return d == Direction::X ? "x" : "y"; }

/// Solution coefficients on interior trial functions plus the optional
/// residual representative of the last substep.
struct SolutionState {
    Grid u;
    std::optional<Grid> r;
    double time = 0.0;
};

struct DirectionalCoefficients {
    Coefficient1D diffusion_split = 1.0;
    Coefficient1D velocity_split = 0.0;
    Coefficient1D diffusion_other = 1.0;
    Coefficient1D velocity_other = 0.0;
};

struct DirectionalOperator {
    Direction direction = Direction::X;
    double dt_eff = 0.0;
    bool stabilized = true;

    SplineSpace trial_split;
    SplineSpace test_split;
    SplineSpace trial_other;

    // All blocks are Dirichlet-eliminated.
    BandedMatrix gram_split;   // test Gram, m x m
    BandedMatrix test_mass;    // test L2 mass, m x m
    BandedMatrix form_split;   // mass_split + dt_eff * op_split, m x n
    BandedMatrix mass_split;   // test <- trial mass, m x n
    BandedMatrix op_split;     // test <- trial eps K + G, m x n
    BandedMatrix mass_other;   // trial mass in the orthogonal direction
    BandedMatrix op_other;     // trial eps K + G in the orthogonal direction

    std::optional<SaddleFactor> saddle;
    std::optional<BandedLU> form_lu;
    BandedLU other_lu;

    [[nodiscard]] int test_dim() const { return gram_split.rows(); }
    [[nodiscard]] int trial_dim() const { return form_split.cols(); }
    [[nodiscard]] int other_dim() const { return mass_other.rows(); }

    /// Shape of a grid tested against (test_split, trial_other).
    [[nodiscard]] std::pair<int, int> test_grid_shape() const {
        return direction == Direction::X ? std::pair{test_dim(), other_dim()} : std::pair{other_dim(), test_dim()};
    }

    [[nodiscard]] std::pair<int, int> trial_grid_shape() const {
        return direction == Direction::X ? std::pair{trial_dim(), other_dim()} : std::pair{other_dim(), trial_dim()};
    }
};

/// (split (x) other) applied to the grid, respecting which axis is split.
inline Grid oriented_matvec(Direction d, const BandedMatrix& split, const BandedMatrix& other, const Grid& g) {
    return d == Direction::X ? kron_matvec(split, other, g) : kron_matvec(other, split, g);
}

inline bool coarser_than(const SplineSpace& test, const SplineSpace& trial) {
    return test.degree < trial.degree || (test.degree == trial.degree && test.continuity > trial.continuity);
}

inline DirectionalOperator build_directional(Direction direction, const SplineSpace& trial_split,
                                             const SplineSpace& test_split, const SplineSpace& trial_other,
                                             const DirectionalCoefficients& coef, double dt_eff,
                                             bool stabilized = true) {
    if (coarser_than(test_split, trial_split)) {
        throw parameter_error("test space (" + std::to_string(test_split.degree) + "," +
                              std::to_string(test_split.continuity) + ") is coarser than trial space (" +
                              std::to_string(trial_split.degree) + "," + std::to_string(trial_split.continuity) + ")");
    }
    if (!stabilized && !(test_split == trial_split)) {
        throw parameter_error("Galerkin substeps require the test space to equal the trial space");
    }
    DirectionalOperator op;
    op.direction = direction;
    op.dt_eff = dt_eff;
    op.stabilized = stabilized;
    op.trial_split = trial_split;
    op.test_split = test_split;
    op.trial_other = trial_other;

    const auto& u = trial_split;
    const auto& v = test_split;
    const auto& o = trial_other;
    op.test_mass = apply_dirichlet(mass(v, v), v, v);
    op.gram_split = apply_dirichlet(gram(v), v, v);
    op.mass_split = apply_dirichlet(mass(u, v), v, u);
    op.op_split = apply_dirichlet(stiffness(u, v, coef.diffusion_split) + advection(u, v, coef.velocity_split), v, u);
    op.form_split = BandedMatrix::combine(1.0, op.mass_split, dt_eff, op.op_split);
    op.mass_other = apply_dirichlet(mass(o, o), o, o);
    op.op_other = apply_dirichlet(stiffness(o, o, coef.diffusion_other) + advection(o, o, coef.velocity_other), o, o);

    op.other_lu = BandedLU(op.mass_other);
    if (stabilized) {
        op.saddle.emplace(op.gram_split, op.form_split);
    } else {
        op.form_lu.emplace(op.form_split);
    }
    return op;
}

/// Solves one substep for the load `rhs` (tested against the substep's test
/// functions). Returns u and, in stabilized mode, the residual representative.
inline SolutionState igrm_substep(const DirectionalOperator& op, const Grid& rhs) {
    const auto [tx, ty] = op.test_grid_shape();
    if (rhs.nx != tx || rhs.ny != ty) throw dimension_error("igrm_substep: rhs does not match the test grid");
    SolutionState out;
    const int m = op.test_dim();
    const int n = op.trial_dim();
    const int o = op.other_dim();

    if (!op.stabilized) {
        out.u = op.direction == Direction::X ? kron_solve(*op.form_lu, op.other_lu, rhs)
                                             : kron_solve(op.other_lu, *op.form_lu, rhs);
        return out;
    }

    if (op.direction == Direction::X) {
        Grid ext(m + n, o);
        std::copy(rhs.values.begin(), rhs.values.end(), ext.values.begin());
        const Grid sol = kron_solve(*op.saddle, op.other_lu, ext);
        Grid r(m, o), u(n, o);
        std::copy(sol.values.begin(), sol.values.begin() + r.size(), r.values.begin());
        std::copy(sol.values.begin() + r.size(), sol.values.end(), u.values.begin());
        out.u = std::move(u);
        out.r = std::move(r);
    } else {
        Grid ext(o, m + n);
        for (int i = 0; i < o; ++i) {
            for (int j = 0; j < m; ++j) ext(i, j) = rhs(i, j);
        }
        const Grid sol = kron_solve(op.other_lu, *op.saddle, ext);
        Grid r(o, m), u(o, n);
        for (int i = 0; i < o; ++i) {
            for (int j = 0; j < m; ++j) r(i, j) = sol(i, j);
            for (int j = 0; j < n; ++j) u(i, j) = sol(i, m + j);
        }
        out.u = std::move(u);
        out.r = std::move(r);
    }
    return out;
}

struct ResidualNorms {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// L2 and split-H1 norms of the residual representative.
inline ResidualNorms residual_norms(const DirectionalOperator& op, const Grid& r) {
    const auto [tx, ty] = op.test_grid_shape();
    if (r.nx != tx || r.ny != ty) throw dimension_error("residual_norms: grid does not match the test grid");
    const double l2 = dot(r, oriented_matvec(op.direction, op.test_mass, op.mass_other, r));
    const double h1 = dot(r, oriented_matvec(op.direction, op.gram_split, op.mass_other, r));
    return {std::sqrt(std::max(0.0, l2)), std::sqrt(std::max(0.0, h1))};
}

/// Load of f(., ., t) tested against the substep's test functions.
inline Grid substep_load(const DirectionalOperator& op, const std::function<double(double, double)>& f) {
    return op.direction == Direction::X ? assemble_load(op.test_split, op.trial_other, f)
                                        : assemble_load(op.trial_other, op.test_split, f);
}

}  // namespace igrm
