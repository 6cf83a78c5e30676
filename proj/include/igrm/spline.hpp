#pragma once

// One-dimensional B-spline spaces on uniform meshes with clamped knot vectors.
//
// A space is described by the pair (degree p, continuity c). Interior
// breakpoints are repeated p - c times, so c = p - 1 gives the maximally
// smooth spline space and c = -1 gives fully discontinuous piecewise
// polynomials.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "igrm/errors.hpp"

namespace igrm {

struct SplineSpace {
    int degree = 0;
    int continuity = -1;
    int n_elements = 1;
    double a = 0.0;
    double b = 1.0;
    std::vector<double> knots;

    /// Number of repetitions of every interior breakpoint.
    [[nodiscard]] int multiplicity() const { return degree - continuity; }

    [[nodiscard]] int dim() const { return n_elements * multiplicity() + continuity + 1; }

    [[nodiscard]] double element_size() const { return (b - a) / n_elements; }

    [[nodiscard]] double breakpoint(int e) const {
        return e == n_elements ? b : a + e * element_size();
    }

    /// Index of the first basis function that is nonzero on element e.
    [[nodiscard]] int first_function(int e) const { return e * multiplicity(); }

    /// Knot span index of element e (the last copy of its left breakpoint).
    [[nodiscard]] int span(int e) const { return degree + e * multiplicity(); }

    /// Element containing x; the right endpoint maps to the last element.
    [[nodiscard]] int element_of(double x) const {
        if (x < a || x > b) {
            throw domain_error("point " + std::to_string(x) + " outside [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
        }
        auto e = static_cast<int>(std::floor((x - a) / element_size()));
        e = std::clamp(e, 0, n_elements - 1);
        // guard against rounding at breakpoints
        if (x < breakpoint(e)) --e;
        else if (e + 1 < n_elements && x >= breakpoint(e + 1)) ++e;
        return e;
    }

    /// Inclusive range of elements on which basis function i is supported.
    [[nodiscard]] std::pair<int, int> support(int i) const {
        const int m = multiplicity();
        int lo = (i - degree + m - 1) / m;
        if (i - degree < 0) lo = 0;
        int hi = std::min(i / m, n_elements - 1);
        return {std::max(lo, 0), hi};
    }

    friend bool operator==(const SplineSpace& l, const SplineSpace& r) {
        return l.degree == r.degree && l.continuity == r.continuity && l.n_elements == r.n_elements &&
               l.a == r.a && l.b == r.b;
    }
};

/// Nonzero basis functions at a point: indices first_index .. first_index + p.
struct BasisEval {
    int first_index = 0;
    std::vector<double> values;
    std::vector<double> derivatives;
};

inline SplineSpace make_space(int degree, int continuity, int n_elements, std::pair<double, double> interval) {
    if (degree < 0) throw parameter_error("degree must be non-negative");
    if (continuity < -1 || continuity > degree - 1) {
        throw parameter_error("continuity " + std::to_string(continuity) + " invalid for degree " +
                              std::to_string(degree));
    }
    if (n_elements < 1) throw parameter_error("at least one element required");
    if (!(interval.first < interval.second)) throw parameter_error("interval must satisfy a < b");

    SplineSpace s;
    s.degree = degree;
    s.continuity = continuity;
    s.n_elements = n_elements;
    s.a = interval.first;
    s.b = interval.second;

    const int m = degree - continuity;
    s.knots.reserve(2 * (degree + 1) + (n_elements - 1) * m);
    s.knots.insert(s.knots.end(), degree + 1, s.a);
    for (int e = 1; e < n_elements; ++e) {
        s.knots.insert(s.knots.end(), m, s.breakpoint(e));
    }
    s.knots.insert(s.knots.end(), degree + 1, s.b);
    return s;
}

inline int dim(const SplineSpace& s) { return s.dim(); }

namespace detail {

// Cox-de Boor triangle: values of the degree-`deg` functions nonzero on `span`.
inline void cox_de_boor(const std::vector<double>& t, int span, int deg, double x, double* out) {
    std::vector<double> left(deg + 1), right(deg + 1);
    out[0] = 1.0;
    for (int j = 1; j <= deg; ++j) {
        left[j] = x - t[span + 1 - j];
        right[j] = t[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double denom = right[r + 1] + left[j - r];
            const double tmp = denom == 0.0 ? 0.0 : out[r] / denom;
            out[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out[j] = saved;
    }
}

}  // namespace detail

/// Values and first derivatives of the basis functions of element e at x.
inline BasisEval eval_on_element(const SplineSpace& s, int e, double x) {
    const int p = s.degree;
    const int span = s.span(e);
    BasisEval r;
    r.first_index = span - p;
    r.values.assign(p + 1, 0.0);
    r.derivatives.assign(p + 1, 0.0);
    detail::cox_de_boor(s.knots, span, p, x, r.values.data());
    if (p == 0) return r;

    std::vector<double> lower(p, 0.0);
    detail::cox_de_boor(s.knots, span, p - 1, x, lower.data());
    const auto& t = s.knots;
    for (int j = 0; j <= p; ++j) {
        const int i = span - p + j;
        double d = 0.0;
        if (j > 0) {
            const double h = t[i + p] - t[i];
            if (h > 0.0) d += p / h * lower[j - 1];
        }
        if (j < p) {
            const double h = t[i + p + 1] - t[i + 1];
            if (h > 0.0) d -= p / h * lower[j];
        }
        r.derivatives[j] = d;
    }
    return r;
}

inline BasisEval eval(const SplineSpace& s, double x) { return eval_on_element(s, s.element_of(x), x); }

/// Value of the spline with coefficients `coef` (full, non-eliminated) at x.
inline double eval_function(const SplineSpace& s, const std::vector<double>& coef, double x) {
    const auto be = eval(s, x);
    double v = 0.0;
    for (std::size_t j = 0; j < be.values.size(); ++j) v += coef[be.first_index + j] * be.values[j];
    return v;
}

}  // namespace igrm
