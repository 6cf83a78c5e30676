#pragma once

// Benchmark advection-diffusion problems on axis-aligned rectangles:
//   u_t - div(eps grad u) + beta . grad u = f,  u = 0 on the boundary.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace igrm {

struct Rectangle {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
};

using Velocity = std::array<double, 2>;

struct ProblemDefinition {
    std::string name;
    Rectangle domain;
    // Per-direction diffusion; eps_x enters the x-derivative term only.
    std::function<double(double)> diffusion_x;
    std::function<double(double)> diffusion_y;
    bool constant_diffusion = true;
    std::function<Velocity(double, double, double)> velocity;
    // True when beta_x depends on (x, t) only and beta_y on (y, t) only.
    bool separable_velocity = true;
    // True when beta changes with t, so operators must be rebuilt every step.
    bool time_dependent_velocity = false;
    std::function<double(double, double, double)> forcing;
    std::function<double(double, double)> initial;
    std::optional<std::function<double(double, double, double)>> exact;
    std::optional<std::function<std::array<double, 2>(double, double, double)>> exact_gradient;
    double t0 = 0.0;
    double t_end = 1.0;
};

/// Smooth manufactured solution sin(pi x) sin(pi y) sin(pi t) on the unit square.
inline ProblemDefinition manufactured(double alpha = 1e-2, Velocity beta = {1.0, 0.0}) {
    using std::numbers::pi;
    ProblemDefinition p;
    p.name = "manufactured";
    p.domain = {0.0, 1.0, 0.0, 1.0};
    p.diffusion_x = [alpha](double) { return alpha; };
    p.diffusion_y = [alpha](double) { return alpha; };
    p.velocity = [beta](double, double, double) { return beta; };
    p.forcing = [alpha, beta](double x, double y, double t) {
        const double sx = std::sin(pi * x), sy = std::sin(pi * y), st = std::sin(pi * t);
        return pi * std::cos(pi * t) * sx * sy + 2.0 * alpha * pi * pi * st * sx * sy +
               beta[0] * pi * st * std::cos(pi * x) * sy + beta[1] * pi * st * sx * std::cos(pi * y);
    };
    p.initial = [](double, double) { return 0.0; };
    p.exact = [](double x, double y, double t) { return std::sin(pi * x) * std::sin(pi * y) * std::sin(pi * t); };
    p.exact_gradient = [](double x, double y, double t) {
        const double st = std::sin(pi * t);
        return std::array<double, 2>{pi * std::cos(pi * x) * std::sin(pi * y) * st,
                                     pi * std::sin(pi * x) * std::cos(pi * y) * st};
    };
    p.t0 = 0.0;
    p.t_end = 2.0;
    return p;
}

struct PollutionParams {
    double chimney_x = 1500.0;
    double chimney_y = 1500.0;
    double chimney_radius = 25.0;
    double ambient = 1e-6;
    double size = 5000.0;
};

/// Wind direction angle a(t) of the chimney problem.
inline double pollution_wind_angle(double t) {
    using std::numbers::pi;
    const double s = t / 150.0;
    return pi / 3.0 * (std::sin(s) + 0.5 * std::sin(2.3 * s)) + 3.0 / 8.0 * pi;
}

/// Source profile (r - 1)^2 (r + 1)^2 with r = min(1, (d / radius)^2).
inline double chimney_source(double distance, double radius) {
    const double r = std::min(1.0, (distance / radius) * (distance / radius));
    return (r - 1.0) * (r - 1.0) * (r + 1.0) * (r + 1.0);
}

inline ProblemDefinition pollution(const PollutionParams& prm = {}) {
    using std::numbers::pi;
    ProblemDefinition p;
    p.name = "pollution";
    p.domain = {0.0, prm.size, 0.0, prm.size};
    p.diffusion_x = [](double x) { return 50.0 + std::sin(x * pi / 5000.0); };
    p.diffusion_y = [](double y) { return 50.0 + y / 5000.0; };
    p.constant_diffusion = false;
    p.velocity = [](double, double, double t) {
        const double a = pollution_wind_angle(t);
        return Velocity{std::cos(a), std::sin(a)};
    };
    p.separable_velocity = true;
    p.time_dependent_velocity = true;
    p.forcing = [prm](double x, double y, double) {
        return chimney_source(std::hypot(x - prm.chimney_x, y - prm.chimney_y), prm.chimney_radius);
    };
    p.initial = [amb = prm.ambient](double, double) { return amb; };
    p.t0 = 0.0;
    p.t_end = 10.0;
    return p;
}

struct CircularWindParams {
    double alpha = 1e-6;
    // Bump center and width in the unit-square coordinates of the domain.
    double center_x = 0.5;
    double center_y = 0.25;
    double sigma = 0.05;
    Rectangle domain{-1.0, 1.0, -1.0, 1.0};
};

inline ProblemDefinition circular_wind(const CircularWindParams& prm = {}) {
    ProblemDefinition p;
    p.name = "circular-wind";
    p.domain = prm.domain;
    p.diffusion_x = [a = prm.alpha](double) { return a; };
    p.diffusion_y = [a = prm.alpha](double) { return a; };
    p.velocity = [](double x, double y, double) { return Velocity{y, -x}; };
    p.separable_velocity = false;
    p.forcing = [](double, double, double) { return 0.0; };
    const double lx = prm.domain.x1 - prm.domain.x0;
    const double ly = prm.domain.y1 - prm.domain.y0;
    const double cx = prm.domain.x0 + prm.center_x * lx;
    const double cy = prm.domain.y0 + prm.center_y * ly;
    const double s = prm.sigma * lx;
    p.initial = [cx, cy, s](double x, double y) {
        return std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2.0 * s * s));
    };
    p.t0 = 0.0;
    p.t_end = 10.0;
    return p;
}

inline ProblemDefinition problem_by_name(const std::string& name) {
    if (name == "manufactured" || name == "membrane") return manufactured();
    if (name == "pollution") return pollution();
    if (name == "circular-wind" || name == "circular_wind") return circular_wind();
    throw std::invalid_argument("unknown problem '" + name + "'");
}

}  // namespace igrm
