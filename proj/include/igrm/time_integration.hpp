#pragma once

// Direction-split implicit time integrators. Each substep solves an implicit
// problem with derivatives in one direction only, either by plain Galerkin or
// by residual minimization on an enriched test space.
//
//   Peaceman-Rachford     x(tau/2) then y(tau/2), explicit half of the other
//                         operator on the right-hand side, f at t + tau/2.
//   Strang / BE           x(tau/2), y(tau), x(tau/2), backward Euler each.
//   Strang / CN           x(tau/4), y(tau/2), x(tau/4) as Crank-Nicolson.
//   BE (Lie)              x(tau), y(tau), backward Euler each.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "igrm/igrm_core.hpp"
#include "igrm/problems.hpp"

namespace igrm {

enum class SchemeKind { PeacemanRachford, StrangBackwardEuler, StrangCrankNicolson, BackwardEulerMonolithicSplit };

inline std::string to_string(SchemeKind s) {
    switch (s) {
        case SchemeKind::PeacemanRachford: return "pr";
        case SchemeKind::StrangBackwardEuler: return "strang-be";
        case SchemeKind::StrangCrankNicolson: return "strang-cn";
        case SchemeKind::BackwardEulerMonolithicSplit: return "be";
    }
    return "?";
}

inline SchemeKind scheme_from_string(const std::string& s) {
    if (s == "pr") return SchemeKind::PeacemanRachford;
    if (s == "strang-be") return SchemeKind::StrangBackwardEuler;
    if (s == "strang-cn") return SchemeKind::StrangCrankNicolson;
    if (s == "be") return SchemeKind::BackwardEulerMonolithicSplit;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

/// Effective step multiplying the spatial operator in (x substeps, y substep).
inline std::pair<double, double> effective_steps(SchemeKind s, double tau) {
    switch (s) {
        case SchemeKind::PeacemanRachford: return {tau / 2, tau / 2};
        case SchemeKind::StrangBackwardEuler: return {tau / 2, tau};
        case SchemeKind::StrangCrankNicolson: return {tau / 4, tau / 2};
        case SchemeKind::BackwardEulerMonolithicSplit: return {tau, tau};
    }
    return {tau, tau};
}

struct TimeLoopConfig {
    double tau = 0.01;
    int n_steps = 100;
    double t0 = 0.0;
    SchemeKind scheme = SchemeKind::PeacemanRachford;
    bool stabilized = true;
    bool record_residuals = true;

    [[nodiscard]] double t_end() const { return t0 + tau * n_steps; }
};

/// Trial spaces per direction plus the test space used when that direction is split.
struct Discretization {
    SplineSpace trial_x;
    SplineSpace trial_y;
    SplineSpace test_x;
    SplineSpace test_y;
};

struct OperatorSet {
    DirectionalOperator x;
    DirectionalOperator y;
};

using Forcing = std::function<double(double, double, double)>;

/// Operators of one scheme with coefficients frozen at time t.
inline OperatorSet build_operators(const ProblemDefinition& p, const Discretization& d, SchemeKind scheme, double tau,
                                   bool stabilized, double t) {
    if (!p.separable_velocity) {
        throw parameter_error("problem '" + p.name + "' has a non-separable velocity; use the general solver");
    }
    const double ymid = 0.5 * (p.domain.y0 + p.domain.y1);
    const double xmid = 0.5 * (p.domain.x0 + p.domain.x1);
    Coefficient1D eps_x, eps_y;
    if (p.constant_diffusion) {
        eps_x = p.diffusion_x(xmid);
        eps_y = p.diffusion_y(ymid);
    } else {
        eps_x = Coefficient1D{p.diffusion_x};
        eps_y = Coefficient1D{p.diffusion_y};
    }
    const Coefficient1D beta_x{[v = p.velocity, ymid, t](double x) { return v(x, ymid, t)[0]; }};
    const Coefficient1D beta_y{[v = p.velocity, xmid, t](double y) { return v(xmid, y, t)[1]; }};

    const auto [dtx, dty] = effective_steps(scheme, tau);
    const auto& test_x = stabilized ? d.test_x : d.trial_x;
    const auto& test_y = stabilized ? d.test_y : d.trial_y;
    return {build_directional(Direction::X, d.trial_x, test_x, d.trial_y, {eps_x, beta_x, eps_y, beta_y}, dtx,
                              stabilized),
            build_directional(Direction::Y, d.trial_y, test_y, d.trial_x, {eps_y, beta_y, eps_x, beta_x}, dty,
                              stabilized)};
}

namespace detail {

inline Grid forcing_load(const DirectionalOperator& op, const Forcing& f, double t) {
    return substep_load(op, [&f, t](double x, double y) { return f(x, y, t); });
}

// Right-hand side  (mass_split (x) (M_o - c_other * O_o)) u  -  c_split * (op_split (x) M_o) u
inline Grid transfer(const DirectionalOperator& op, const Grid& u, double c_split, double c_other) {
    Grid rhs;
    if (c_other != 0.0) {
        const auto other = BandedMatrix::combine(1.0, op.mass_other, -c_other, op.op_other);
        rhs = oriented_matvec(op.direction, op.mass_split, other, u);
    } else {
        rhs = oriented_matvec(op.direction, op.mass_split, op.mass_other, u);
    }
    if (c_split != 0.0) rhs = axpy(rhs, -c_split, oriented_matvec(op.direction, op.op_split, op.mass_other, u));
    return rhs;
}

inline void accumulate(std::vector<ResidualNorms>* sink, const DirectionalOperator& op, const SolutionState& s) {
    if (sink && s.r) sink->push_back(residual_norms(op, *s.r));
}

}  // namespace detail

/// Peaceman-Rachford step from state.time to state.time + tau.
inline SolutionState pr_step(const SolutionState& s, const OperatorSet& ops, const Forcing& f, double tau,
                             std::vector<ResidualNorms>* residuals = nullptr) {
    const double half = tau / 2;
    const double tm = s.time + half;
    Grid rhs = axpy(detail::transfer(ops.x, s.u, 0.0, half), half, detail::forcing_load(ops.x, f, tm));
    SolutionState mid = igrm_substep(ops.x, rhs);
    detail::accumulate(residuals, ops.x, mid);

    rhs = axpy(detail::transfer(ops.y, mid.u, 0.0, half), half, detail::forcing_load(ops.y, f, tm));
    SolutionState next = igrm_substep(ops.y, rhs);
    detail::accumulate(residuals, ops.y, next);
    next.time = s.time + tau;
    return next;
}

/// Strang splitting with backward Euler substeps.
inline SolutionState strang_be_step(const SolutionState& s, const OperatorSet& ops, const Forcing& f, double tau,
                                    std::vector<ResidualNorms>* residuals = nullptr) {
    const double half = tau / 2;
    Grid rhs = axpy(detail::transfer(ops.x, s.u, 0.0, 0.0), half, detail::forcing_load(ops.x, f, s.time + half));
    SolutionState a = igrm_substep(ops.x, rhs);
    detail::accumulate(residuals, ops.x, a);

    SolutionState b = igrm_substep(ops.y, detail::transfer(ops.y, a.u, 0.0, 0.0));
    detail::accumulate(residuals, ops.y, b);

    rhs = axpy(detail::transfer(ops.x, b.u, 0.0, 0.0), half, detail::forcing_load(ops.x, f, s.time + tau));
    SolutionState next = igrm_substep(ops.x, rhs);
    detail::accumulate(residuals, ops.x, next);
    next.time = s.time + tau;
    return next;
}

/// Strang splitting with Crank-Nicolson substeps.
inline SolutionState strang_cn_step(const SolutionState& s, const OperatorSet& ops, const Forcing& f, double tau,
                                    std::vector<ResidualNorms>* residuals = nullptr) {
    const double q = tau / 4;
    const double tn = s.time, tm = s.time + tau / 2, t1 = s.time + tau;
    Grid rhs = detail::transfer(ops.x, s.u, q, 0.0);
    rhs = axpy(rhs, q, axpy(detail::forcing_load(ops.x, f, tm), 1.0, detail::forcing_load(ops.x, f, tn)));
    SolutionState a = igrm_substep(ops.x, rhs);
    detail::accumulate(residuals, ops.x, a);

    SolutionState b = igrm_substep(ops.y, detail::transfer(ops.y, a.u, tau / 2, 0.0));
    detail::accumulate(residuals, ops.y, b);

    rhs = detail::transfer(ops.x, b.u, q, 0.0);
    rhs = axpy(rhs, q, axpy(detail::forcing_load(ops.x, f, t1), 1.0, detail::forcing_load(ops.x, f, tm)));
    SolutionState next = igrm_substep(ops.x, rhs);
    detail::accumulate(residuals, ops.x, next);
    next.time = t1;
    return next;
}

/// First-order Lie splitting: backward Euler in x with the forcing, then in y.
inline SolutionState be_step(const SolutionState& s, const OperatorSet& ops, const Forcing& f, double tau,
                             std::vector<ResidualNorms>* residuals = nullptr) {
    Grid rhs = axpy(detail::transfer(ops.x, s.u, 0.0, 0.0), tau, detail::forcing_load(ops.x, f, s.time + tau));
    SolutionState a = igrm_substep(ops.x, rhs);
    detail::accumulate(residuals, ops.x, a);
    SolutionState next = igrm_substep(ops.y, detail::transfer(ops.y, a.u, 0.0, 0.0));
    detail::accumulate(residuals, ops.y, next);
    next.time = s.time + tau;
    return next;
}

inline SolutionState step(SchemeKind scheme, const SolutionState& s, const OperatorSet& ops, const Forcing& f,
                          double tau, std::vector<ResidualNorms>* residuals = nullptr) {
    switch (scheme) {
        case SchemeKind::PeacemanRachford: return pr_step(s, ops, f, tau, residuals);
        case SchemeKind::StrangBackwardEuler: return strang_be_step(s, ops, f, tau, residuals);
        case SchemeKind::StrangCrankNicolson: return strang_cn_step(s, ops, f, tau, residuals);
        case SchemeKind::BackwardEulerMonolithicSplit: return be_step(s, ops, f, tau, residuals);
    }
    return s;
}

/// L2 projection of the initial state onto the interior trial space.
inline SolutionState project_initial(const std::function<double(double, double)>& u0, const SplineSpace& trial_x,
                                     const SplineSpace& trial_y, double t0 = 0.0) {
    return {project(u0, trial_x, trial_y), std::nullopt, t0};
}

/// Drives a time loop, rebuilding operators each step when coefficients vary in time.
class TimeStepper {
public:
    TimeStepper(ProblemDefinition problem, Discretization disc, TimeLoopConfig cfg)
    : problem_{std::move(problem)}, disc_{std::move(disc)}, cfg_{cfg} {
        if (!(cfg_.tau > 0.0)) throw parameter_error("time step must be positive");
        if (!problem_.time_dependent_velocity) ops_.emplace(operators_at(cfg_.t0));
    }

    [[nodiscard]] SolutionState initial_state() const {
        return project_initial(problem_.initial, disc_.trial_x, disc_.trial_y, cfg_.t0);
    }

    /// Advances one step; residual norms of every substep are appended to `residuals`.
    SolutionState advance(const SolutionState& s, std::vector<ResidualNorms>* residuals = nullptr) {
        if (problem_.time_dependent_velocity) ops_.emplace(operators_at(s.time + cfg_.tau / 2));
        return step(cfg_.scheme, s, *ops_, problem_.forcing, cfg_.tau, cfg_.record_residuals ? residuals : nullptr);
    }

    [[nodiscard]] const TimeLoopConfig& config() const { return cfg_; }
    [[nodiscard]] const Discretization& discretization() const { return disc_; }
    [[nodiscard]] const ProblemDefinition& problem() const { return problem_; }

private:
    [[nodiscard]] OperatorSet operators_at(double t) const {
        return build_operators(problem_, disc_, cfg_.scheme, cfg_.tau, cfg_.stabilized, t);
    }

    ProblemDefinition problem_;
    Discretization disc_;
    TimeLoopConfig cfg_;
    std::optional<OperatorSet> ops_;
};

/// Uniform spaces for a problem: trial (p, c) in both directions, test (q, d).
inline Discretization make_discretization(const ProblemDefinition& p, int nx, int ny, std::pair<int, int> trial,
                                          std::pair<int, int> test) {
    return {make_space(trial.first, trial.second, nx, {p.domain.x0, p.domain.x1}),
            make_space(trial.first, trial.second, ny, {p.domain.y0, p.domain.y1}),
            make_space(test.first, test.second, nx, {p.domain.x0, p.domain.x1}),
            make_space(test.first, test.second, ny, {p.domain.y0, p.domain.y1})};
}

}  // namespace igrm
