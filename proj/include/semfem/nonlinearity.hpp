#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semfem/geometry.hpp"

namespace semfem {

// Reaction term g(x, xi) with its analytic derivative d/dxi. The point
// argument is carried for generality; the built-ins ignore it.
struct Nonlinearity {
    std::function<double(Point2, double)> g;
    std::function<double(Point2, double)> g_u;
    std::string label;
};

namespace detail {

// exp with a loud overflow guard; the negated comparison also catches NaN.
inline double checked_exp(double arg) {
    if (!(std::abs(arg) <= 700.0))
        throw std::overflow_error("exp argument out of range: " + std::to_string(arg));
    return std::exp(arg);
}

}  // namespace detail

inline Nonlinearity nl_exp() {
    return {[](Point2, double xi) { return detail::checked_exp(xi); },
            [](Point2, double xi) { return detail::checked_exp(xi); }, "exp"};
}

inline Nonlinearity nl_cubic() {
    return {[](Point2, double xi) { return xi * xi * xi; },
            [](Point2, double xi) { return 3.0 * xi * xi; }, "cubic"};
}

// g(xi) = exp(c |xi|^p xi), g_u = c (p+1) |xi|^p exp(c |xi|^p xi).
inline Nonlinearity nl_exp_power(double c, double p) {
    if (!(c > 0.0) || !(p >= 0.0))
        throw std::invalid_argument("nl_exp_power: require c > 0 and p >= 0");
    return {[c, p](Point2, double xi) {
                return detail::checked_exp(c * std::pow(std::abs(xi), p) * xi);
            },
            [c, p](Point2, double xi) {
                double a = std::pow(std::abs(xi), p);
                return c * (p + 1.0) * a * detail::checked_exp(c * a * xi);
            },
            "exp_power"};
}

inline Nonlinearity nl_exp_scaled(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("nl_exp_scaled: require c > 0");
    return {[c](Point2, double xi) { return detail::checked_exp(c * xi); },
            [c](Point2, double xi) { return c * detail::checked_exp(c * xi); }, "exp_scaled"};
}

// Diagnostic monotonicity probe over the sampled values; never enforces.
struct MonotoneReport {
    double min_pairwise = 0.0;  // min over pairs of (g(x,t1)-g(x,t2))(t1-t2)
    double min_sign = 0.0;      // min over samples of g(x,t)*t
};

inline MonotoneReport check_monotone(const Nonlinearity& n, const std::vector<Point2>& points,
                                     const std::vector<double>& values) {
    MonotoneReport rep;
    bool first_pair = true, first_sign = true;
    for (const auto& x : points) {
        for (double t : values) {
            double gt = n.g(x, t);
            double sign = gt * t;
            if (first_sign || sign < rep.min_sign) rep.min_sign = sign;
            first_sign = false;
            for (double s : values) {
                double expr = (gt - n.g(x, s)) * (t - s);
                if (first_pair || expr < rep.min_pairwise) rep.min_pairwise = expr;
                first_pair = false;
            }
        }
    }
    return rep;
}

}  // namespace semfem
