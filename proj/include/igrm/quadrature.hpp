#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "igrm/errors.hpp"

namespace igrm {

struct QuadratureRule {
    std::vector<double> points;   // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1.
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw parameter_error("quadrature needs at least one point");
    QuadratureRule q;
    q.points.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (n == 1) {
            q.points[0] = 0.0;
            q.weights[0] = 2.0;
            return q;
        }
        q.points[i] = -x;
        q.points[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

}  // namespace igrm
