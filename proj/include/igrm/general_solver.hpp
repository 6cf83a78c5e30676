#pragma once

// Unsplit 2D residual minimization for velocity fields without Kronecker
// structure. The saddle system
//
//     [ A    B ] [r]   [l]
//     [ B^T  0 ] [u] = [0]
//
// uses the full H1 Gram A of the 2D test space and the 2D weak form
// B = M + dt (eps grad . grad + beta . grad), both Dirichlet-eliminated.
// Unknowns are ordered r (test interior) first, then u (trial interior),
// each in Grid order (i along x, row-major).

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "igrm/field.hpp"
#include "igrm/igrm_core.hpp"
#include "igrm/problems.hpp"
#include "igrm/sparse.hpp"

namespace igrm {

struct Space2D {
    SplineSpace x;
    SplineSpace y;

    [[nodiscard]] int dim() const { return x.dim() * y.dim(); }
    [[nodiscard]] int interior_dim() const { return (x.dim() - 2) * (y.dim() - 2); }
};

/// Saddle size counted on the full (pre-elimination) spaces.
inline int saddle_dofs(const Space2D& trial, const Space2D& test) { return test.dim() + trial.dim(); }

/// Unknowns actually solved for after Dirichlet elimination.
inline int saddle_unknowns(const Space2D& trial, const Space2D& test) {
    return test.interior_dim() + trial.interior_dim();
}

struct Coefficients2D {
    std::function<double(double)> diffusion_x = [](double) { return 0.0; };
    std::function<double(double)> diffusion_y = [](double) { return 0.0; };
    std::function<Velocity(double, double, double)> velocity = [](double, double, double) { return Velocity{0.0, 0.0}; };
};

inline Coefficients2D coefficients_of(const ProblemDefinition& p) { return {p.diffusion_x, p.diffusion_y, p.velocity}; }

inline Coefficients2D constant_coefficients(double alpha, Velocity beta = {0.0, 0.0}) {
    return {[alpha](double) { return alpha; }, [alpha](double) { return alpha; },
            [beta](double, double, double) { return beta; }};
}

namespace detail {

inline void check_same_mesh(const Space2D& a, const Space2D& b) {
    (void)coupling_pattern(a.x, b.x);
    (void)coupling_pattern(a.y, b.y);
}

// Values and first derivatives of the local tensor basis at one point.
struct LocalBasis2D {
    std::vector<int> index;  // interior index or -1 for boundary functions
    std::vector<double> v, dx, dy;

    void build(const Space2D& s, const BasisEval& bx, const BasisEval& by) {
        const int my = s.y.dim() - 2;
        const auto nx = bx.values.size(), ny = by.values.size();
        index.resize(nx * ny);
        v.resize(nx * ny);
        dx.resize(nx * ny);
        dy.resize(nx * ny);
        for (std::size_t a = 0; a < nx; ++a) {
            const int i = bx.first_index + static_cast<int>(a) - 1;
            for (std::size_t b = 0; b < ny; ++b) {
                const int j = by.first_index + static_cast<int>(b) - 1;
                const auto k = a * ny + b;
                index[k] = (i < 0 || i >= s.x.dim() - 2 || j < 0 || j >= my) ? -1 : i * my + j;
                v[k] = bx.values[a] * by.values[b];
                dx[k] = bx.derivatives[a] * by.values[b];
                dy[k] = bx.values[a] * by.derivatives[b];
            }
        }
    }
};

// Element-by-element assembly driver. `kernel(w, x, y, test, trial, local)`
// accumulates into the row-major local block (test rows, trial cols).
template <typename Kernel>
SparseMatrix assemble_2d(const Space2D& trial, const Space2D& test, int row_offset, int col_offset, int rows, int cols,
                         Kernel&& kernel, std::vector<SparseMatrix::Triplet>* sink = nullptr) {
    check_same_mesh(trial, test);
    const int nq = std::max(trial.x.degree, test.x.degree) + 2;
    const int nqy = std::max(trial.y.degree, test.y.degree) + 2;
    const ElementQuadrature qx_test(test.x, nq), qx_trial(trial.x, nq);
    const ElementQuadrature qy_test(test.y, nqy), qy_trial(trial.y, nqy);

    std::vector<SparseMatrix::Triplet> own;
    auto& out = sink ? *sink : own;
    LocalBasis2D bt, bu;
    std::vector<double> local;
    for (int ex = 0; ex < test.x.n_elements; ++ex) {
        for (int ey = 0; ey < test.y.n_elements; ++ey) {
            std::vector<int> rows_idx, cols_idx;
            for (int a = 0; a < nq; ++a) {
                const int ka = ex * nq + a;
                for (int b = 0; b < nqy; ++b) {
                    const int kb = ey * nqy + b;
                    bt.build(test, qx_test.basis[ka], qy_test.basis[kb]);
                    bu.build(trial, qx_trial.basis[ka], qy_trial.basis[kb]);
                    if (local.empty()) {
                        local.assign(bt.v.size() * bu.v.size(), 0.0);
                        rows_idx = bt.index;
                        cols_idx = bu.index;
                    }
                    kernel(qx_test.weights[ka] * qy_test.weights[kb], qx_test.points[ka], qy_test.points[kb], bt, bu,
                           local);
                }
            }
            const std::size_t nu = cols_idx.size();
            for (std::size_t r = 0; r < rows_idx.size(); ++r) {
                if (rows_idx[r] < 0) continue;
                for (std::size_t c = 0; c < nu; ++c) {
                    if (cols_idx[c] < 0) continue;
                    const double val = local[r * nu + c];
                    if (val != 0.0) out.push_back({rows_idx[r] + row_offset, cols_idx[c] + col_offset, val});
                }
            }
            local.clear();
        }
    }
    if (sink) return {};
    return SparseMatrix::from_triplets(rows, cols, std::move(own));
}

inline auto gram_kernel() {
    return [](double w, double, double, const LocalBasis2D& t, const LocalBasis2D& u, std::vector<double>& loc) {
        const std::size_t nu = u.v.size();
        for (std::size_t i = 0; i < t.v.size(); ++i) {
            for (std::size_t j = 0; j < nu; ++j) {
                loc[i * nu + j] += w * (t.v[i] * u.v[j] + t.dx[i] * u.dx[j] + t.dy[i] * u.dy[j]);
            }
        }
    };
}

inline auto mass_kernel() {
    return [](double w, double, double, const LocalBasis2D& t, const LocalBasis2D& u, std::vector<double>& loc) {
        const std::size_t nu = u.v.size();
        for (std::size_t i = 0; i < t.v.size(); ++i) {
            for (std::size_t j = 0; j < nu; ++j) loc[i * nu + j] += w * t.v[i] * u.v[j];
        }
    };
}

// (u, v) + s ((eps_x u_x, v_x) + (eps_y u_y, v_y) + (beta . grad u, v))
inline auto form_kernel(const Coefficients2D& c, double s, double t) {
    return [&c, s, t](double w, double x, double y, const LocalBasis2D& tb, const LocalBasis2D& ub,
                      std::vector<double>& loc) {
        const double ex = c.diffusion_x(x), ey = c.diffusion_y(y);
        const Velocity beta = c.velocity(x, y, t);
        const std::size_t nu = ub.v.size();
        for (std::size_t i = 0; i < tb.v.size(); ++i) {
            const double vi = tb.v[i];
            for (std::size_t j = 0; j < nu; ++j) {
                const double adv = beta[0] * ub.dx[j] + beta[1] * ub.dy[j];
                const double dif = ex * ub.dx[j] * tb.dx[i] + ey * ub.dy[j] * tb.dy[i];
                loc[i * nu + j] += w * (ub.v[j] * vi + s * (dif + adv * vi));
            }
        }
    };
}

}  // namespace detail

/// Full H1 Gram of the interior test space.
inline SparseMatrix assemble_2d_gram(const Space2D& test) {
    const int m = test.interior_dim();
    return detail::assemble_2d(test, test, 0, 0, m, m, detail::gram_kernel());
}

/// L2 mass between interior spaces, rows indexed by `test`.
inline SparseMatrix assemble_2d_mass(const Space2D& trial, const Space2D& test) {
    return detail::assemble_2d(trial, test, 0, 0, test.interior_dim(), trial.interior_dim(), detail::mass_kernel());
}

/// Weak form (u, v) + s a(u, v) with rows indexed by `test`.
inline SparseMatrix assemble_2d_form(const Space2D& trial, const Space2D& test, const Coefficients2D& c, double s,
                                     double t) {
    return detail::assemble_2d(trial, test, 0, 0, test.interior_dim(), trial.interior_dim(),
                               detail::form_kernel(c, s, t));
}

/// [[A, B], [B^T, 0]] with B = M + dt_eff a(., .) frozen at time t.
inline SparseMatrix assemble_2d_saddle(const Space2D& trial, const Space2D& test, const Coefficients2D& c,
                                       double dt_eff, double t) {
    const int m = test.interior_dim();
    const int n = trial.interior_dim();
    std::vector<SparseMatrix::Triplet> entries;
    detail::assemble_2d(test, test, 0, 0, m, m, detail::gram_kernel(), &entries);
    const std::size_t gram_end = entries.size();
    detail::assemble_2d(trial, test, 0, m, m, n, detail::form_kernel(c, dt_eff, t), &entries);
    const std::size_t form_end = entries.size();
    for (std::size_t k = gram_end; k < form_end; ++k) {
        const auto e = entries[k];
        entries.push_back({e.col, e.row, e.value});
    }
    return SparseMatrix::from_triplets(m + n, m + n, std::move(entries));
}

inline SparseMatrix assemble_2d_saddle(const Space2D& trial, const Space2D& test, double alpha,
                                       const std::function<Velocity(double, double, double)>& beta, double dt_eff,
                                       double t) {
    Coefficients2D c = constant_coefficients(alpha);
    c.velocity = beta;
    return assemble_2d_saddle(trial, test, c, dt_eff, t);
}

/// Monolithic Crank-Nicolson stepping of the unsplit saddle system.
class GeneralSolver {
public:
    GeneralSolver(ProblemDefinition problem, Space2D trial, Space2D test, double tau)
    : problem_{std::move(problem)}, trial_{std::move(trial)}, test_{std::move(test)}, tau_{tau} {
        if (!(tau_ > 0.0)) throw parameter_error("time step must be positive");
        if (coarser_than(test_.x, trial_.x) || coarser_than(test_.y, trial_.y)) {
            throw parameter_error("test space is coarser than the trial space");
        }
        coef_ = coefficients_of(problem_);
        test_mass_ = assemble_2d_mass(test_, test_);
        test_gram_ = assemble_2d_gram(test_);
        if (!problem_.time_dependent_velocity) prepare(problem_.t0);
    }

    [[nodiscard]] SolutionState initial_state() const {
        return {project(problem_.initial, trial_.x, trial_.y), std::nullopt, problem_.t0};
    }

    SolutionState step(const SolutionState& s) {
        if (problem_.time_dependent_velocity || !lu_) prepare(s.time + tau_ / 2);
        const int m = test_.interior_dim();
        const int n = trial_.interior_dim();
        if (static_cast<int>(s.u.size()) != n) throw dimension_error("general step: state does not match trial space");

        std::vector<double> rhs(static_cast<std::size_t>(m + n), 0.0);
        explicit_.multiply(s.u.values, std::span<double>{rhs.data(), static_cast<std::size_t>(m)});
        const auto& f = problem_.forcing;
        const double t0 = s.time, t1 = s.time + tau_;
        const Grid load = assemble_load(test_.x, test_.y, [&](double x, double y) {
            return 0.5 * tau_ * (f(x, y, t0) + f(x, y, t1));
        });
        for (int k = 0; k < m; ++k) rhs[k] += load.values[k];

        lu_->solve(rhs);
        SolutionState out;
        out.time = t1;
        out.r = Grid(test_.x.dim() - 2, test_.y.dim() - 2);
        out.u = Grid(trial_.x.dim() - 2, trial_.y.dim() - 2);
        std::copy(rhs.begin(), rhs.begin() + m, out.r->values.begin());
        std::copy(rhs.begin() + m, rhs.end(), out.u.values.begin());
        return out;
    }

    [[nodiscard]] ResidualNorms residual_norms(const Grid& r) const {
        const auto mr = test_mass_ * std::span<const double>{r.values};
        const auto ar = test_gram_ * std::span<const double>{r.values};
        double l2 = 0.0, h1 = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            l2 += r.values[k] * mr[k];
            h1 += r.values[k] * ar[k];
        }
        return {std::sqrt(std::max(0.0, l2)), std::sqrt(std::max(0.0, h1))};
    }

    [[nodiscard]] const SparseMatrix& system() const { return system_; }
    [[nodiscard]] const Space2D& trial() const { return trial_; }
    [[nodiscard]] const Space2D& test() const { return test_; }
    [[nodiscard]] const ProblemDefinition& problem() const { return problem_; }
    [[nodiscard]] double tau() const { return tau_; }
    [[nodiscard]] double last_factor_seconds() const { return factor_seconds_; }

private:
    void prepare(double t) {
        const double dt = tau_ / 2;
        system_ = assemble_2d_saddle(trial_, test_, coef_, dt, t);
        explicit_ = assemble_2d_form(trial_, test_, coef_, -dt, t);
        const auto start = std::chrono::steady_clock::now();
        try {
            lu_ = std::make_unique<SparseLU>(system_);
        } catch (const singular_matrix_error&) {
            throw singular_matrix_error("general saddle system is singular: incompatible trial/test pair");
        }
        factor_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    ProblemDefinition problem_;
    Space2D trial_;
    Space2D test_;
    double tau_;
    Coefficients2D coef_;
    SparseMatrix test_mass_;
    SparseMatrix test_gram_;
    SparseMatrix system_;
    SparseMatrix explicit_;
    std::unique_ptr<SparseLU> lu_;
    double factor_seconds_ = 0.0;
};

inline SolutionState circular_wind_step(const SolutionState& s, GeneralSolver& solver) { return solver.step(s); }

inline Space2D make_space_2d(const Rectangle& d, int nx, int ny, std::pair<int, int> pc) {
    return {make_space(pc.first, pc.second, nx, {d.x0, d.x1}), make_space(pc.first, pc.second, ny, {d.y0, d.y1})};
}

}  // namespace igrm
