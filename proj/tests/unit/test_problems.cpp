#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "igrm/problems.hpp"

using namespace igrm;
using std::numbers::pi;

TEST(Manufactured, ExactSolutionValues) {
    const auto p = manufactured();
    EXPECT_NEAR((*p.exact)(0.5, 0.5, 0.5), 1.0, 1e-15);
    for (double s : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR((*p.exact)(0.0, s, 0.4), 0.0, 1e-15);
        EXPECT_NEAR((*p.exact)(1.0, s, 0.4), 0.0, 1e-15);
        EXPECT_NEAR((*p.exact)(s, 0.0, 0.4), 0.0, 1e-15);
        EXPECT_NEAR((*p.exact)(s, 1.0, 0.4), 0.0, 1e-15);
    }
    EXPECT_EQ(p.initial(0.3, 0.7), 0.0);
}

TEST(Manufactured, ForcingSatisfiesPdeByFiniteDifferences) {
    // u_t - eps lap u + beta . grad u = f, every derivative by central differences.
    for (auto [alpha, beta] : {std::pair{1e-2, Velocity{1.0, 0.0}}, {0.3, Velocity{-0.4, 2.0}}}) {
        const auto p = manufactured(alpha, beta);
        const auto& u = *p.exact;
        const double h = 1e-4;
        for (double x : {0.13, 0.5, 0.81}) {
            for (double y : {0.27, 0.66}) {
                for (double t : {0.1, 0.75, 1.6}) {
                    const double ut = (u(x, y, t + h) - u(x, y, t - h)) / (2 * h);
                    const double ux = (u(x + h, y, t) - u(x - h, y, t)) / (2 * h);
                    const double uy = (u(x, y + h, t) - u(x, y - h, t)) / (2 * h);
                    const double uxx = (u(x + h, y, t) - 2 * u(x, y, t) + u(x - h, y, t)) / (h * h);
                    const double uyy = (u(x, y + h, t) - 2 * u(x, y, t) + u(x, y - h, t)) / (h * h);
                    const double lhs = ut - alpha * (uxx + uyy) + beta[0] * ux + beta[1] * uy;
                    EXPECT_NEAR(lhs, p.forcing(x, y, t), 1e-5);
                }
            }
        }
    }
}

TEST(Manufactured, GradientMatchesDifferences) {
    const auto p = manufactured();
    const double h = 1e-6;
    for (double x : {0.2, 0.9}) {
        for (double y : {0.1, 0.55}) {
            const auto g = (*p.exact_gradient)(x, y, 0.3);
            EXPECT_NEAR(g[0], ((*p.exact)(x + h, y, 0.3) - (*p.exact)(x - h, y, 0.3)) / (2 * h), 1e-8);
            EXPECT_NEAR(g[1], ((*p.exact)(x, y + h, 0.3) - (*p.exact)(x, y - h, 0.3)) / (2 * h), 1e-8);
        }
    }
}

TEST(Pollution, ChimneySource) {
    const auto p = pollution();
    EXPECT_DOUBLE_EQ(p.forcing(1500.0, 1500.0, 0.0), 1.0);
    EXPECT_EQ(p.forcing(1525.0, 1500.0, 0.0), 0.0);
    EXPECT_EQ(p.forcing(1500.0 + 20.0, 1500.0 + 20.0, 3.0), 0.0);
    EXPECT_EQ(p.forcing(4000.0, 100.0, 0.0), 0.0);
    const double half = p.forcing(1500.0 + 12.5, 1500.0, 0.0);
    EXPECT_NEAR(half, 0.75 * 0.75 * 1.25 * 1.25, 1e-14);
    EXPECT_GE(chimney_source(10.0, 25.0), 0.0);
    EXPECT_LE(chimney_source(10.0, 25.0), 1.0);
}

TEST(Pollution, WindAndDiffusion) {
    const auto p = pollution();
    const auto b = p.velocity(0.0, 0.0, 0.0);
    EXPECT_NEAR(b[0], 0.38268343236509, 1e-12);
    EXPECT_NEAR(b[1], 0.92387953251129, 1e-12);
    for (double t : {0.0, 17.0, 200.0, 1234.5}) {
        const auto v = p.velocity(100.0, 4000.0, t);
        EXPECT_NEAR(std::hypot(v[0], v[1]), 1.0, 1e-14);
    }
    EXPECT_NEAR(p.diffusion_x(2500.0), 51.0, 1e-12);
    EXPECT_NEAR(p.diffusion_y(5000.0), 51.0, 1e-12);
    EXPECT_NEAR(p.diffusion_y(0.0), 50.0, 1e-12);
    EXPECT_TRUE(p.time_dependent_velocity);
    EXPECT_TRUE(p.separable_velocity);
    EXPECT_EQ(p.initial(10.0, 10.0), 1e-6);
}

TEST(CircularWind, VelocityField) {
    const auto p = circular_wind();
    const auto z = p.velocity(0.0, 0.0, 0.0);
    EXPECT_EQ(z[0], 0.0);
    EXPECT_EQ(z[1], 0.0);
    const double h = 1e-6;
    for (auto [x, y] : {std::pair{0.3, -0.2}, {-0.7, 0.9}, {0.5, 0.5}}) {
        const auto v = p.velocity(x, y, 0.0);
        EXPECT_NEAR(std::hypot(v[0], v[1]), std::hypot(x, y), 1e-15);
        EXPECT_NEAR(v[0] * x + v[1] * y, 0.0, 1e-15);
        const double div = (p.velocity(x + h, y, 0)[0] - p.velocity(x - h, y, 0)[0]) / (2 * h) +
                           (p.velocity(x, y + h, 0)[1] - p.velocity(x, y - h, 0)[1]) / (2 * h);
        EXPECT_NEAR(div, 0.0, 1e-9);
    }
    EXPECT_FALSE(p.separable_velocity);
}

TEST(CircularWind, InitialBump) {
    const auto p = circular_wind();
    EXPECT_NEAR(p.initial(0.0, -0.5), 1.0, 1e-15);
    // sigma 0.1 in physical units
    EXPECT_NEAR(p.initial(0.1, -0.5), std::exp(-0.5), 1e-14);
    EXPECT_LT(p.initial(-1.0, 1.0), 1e-30);
}

TEST(Registry, LookupByName) {
    EXPECT_EQ(problem_by_name("manufactured").name, "manufactured");
    EXPECT_EQ(problem_by_name("membrane").name, "manufactured");
    EXPECT_EQ(problem_by_name("pollution").name, "pollution");
    EXPECT_EQ(problem_by_name("circular-wind").name, "circular-wind");
    EXPECT_THROW(problem_by_name("heat"), std::invalid_argument);
}
