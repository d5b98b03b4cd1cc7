#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "semfem/grading.hpp"
#include "semfem/mesh.hpp"
#include "semfem/nonlinearity.hpp"

namespace semfem {

enum class CornerKind { DirichletDirichlet, NeumannNeumann, DirichletNeumann };

// Strict lower bound for the admissible grading exponent at a corner of
// interior angle omega: 1 - min(1, pi/omega) for D-D and N-N corners,
// 1 - min(1, pi/(2 omega)) for mixed corners. Computed as (q-1)/q so that
// the re-entrant L-shape values come out as exactly 1/3 and 2/3.
inline double beta_min(double omega, CornerKind kind) {
    if (!(omega > 0.0) || !(omega < 2.0 * std::numbers::pi))
        throw std::invalid_argument("beta_min: corner angle must lie in (0, 2*pi)");
    double q = (kind == CornerKind::DirichletNeumann) ? 2.0 * omega / std::numbers::pi
                                                      : omega / std::numbers::pi;
    return q <= 1.0 ? 0.0 : (q - 1.0) / q;
}

// Boundary-value problem with a known exact solution; f is the closed-form
// source -lap(u) + g(x, u).
struct ManufacturedProblem {
    std::string label;
    std::function<Mesh()> mesh_factory;
    Nonlinearity nonlinearity;
    std::function<double(Point2)> f;
    std::function<double(Point2)> exact_u;
    std::function<Point2(Point2)> exact_grad_u;
    GradingSpec grading;  // default grading; h is overridden per level
};

namespace detail {

inline double r2_checked(Point2 q) {
    double r2 = q.x * q.x + q.y * q.y;
    if (r2 == 0.0)
        throw std::domain_error("manufactured solution evaluated at the singular corner (0,0)");
    return r2;
}

// Family u = r^a * P(x,y) with polynomial P; closed-form gradient and
// Laplacian via
//   grad u = a r^(a-2) (x,y) P + r^a grad P,
//   lap u  = r^a [lap P + (2a (x P_x + y P_y) + a^2 P) / r^2].
struct SingularFactors {
    double a;
    std::function<double(Point2)> P, Px, Py, lapP;

    double value(Point2 q) const {
        return std::pow(r2_checked(q), 0.5 * a) * P(q);
    }
    Point2 grad(Point2 q) const {
        double r2 = r2_checked(q);
        double ra = std::pow(r2, 0.5 * a);
        double s = a * ra / r2 * P(q);
        return {s * q.x + ra * Px(q), s * q.y + ra * Py(q)};
    }
    double laplacian(Point2 q) const {
        double r2 = r2_checked(q);
        double ra = std::pow(r2, 0.5 * a);
        return ra * (lapP(q) + (2.0 * a * (q.x * Px(q) + q.y * Py(q)) + a * a * P(q)) / r2);
    }
};

inline GradingSpec origin_grading(double beta) {
    GradingSpec spec;
    spec.corners = {{{0.0, 0.0}, beta}};
    spec.h = 1.0;
    return spec;
}

}  // namespace detail

// u = sin(pi x) sin(pi y), g(u) = e^u, all-Dirichlet; smooth, so the default
// mesh family is uniform (beta = 0).
inline ManufacturedProblem experiment1() {
    using std::numbers::pi;
    ManufacturedProblem p;
    p.label = "exp1";
    p.mesh_factory = [] { return l_shape_initial_mesh(false); };
    p.nonlinearity = nl_exp();
    p.exact_u = [](Point2 q) { return std::sin(pi * q.x) * std::sin(pi * q.y); };
    p.exact_grad_u = [](Point2 q) -> Point2 {
        return {pi * std::cos(pi * q.x) * std::sin(pi * q.y),
                pi * std::sin(pi * q.x) * std::cos(pi * q.y)};
    };
    p.f = [g = p.nonlinearity.g, u = p.exact_u](Point2 q) {
        double uq = u(q);
        return 2.0 * pi * pi * uq + g(q, uq);
    };
    p.grading = detail::origin_grading(0.0);
    return p;
}

// u = 2 r^(-4/3) x y (1-x^2)(1-y^2), g(u) = u^3, all-Dirichlet; r^(2/3)
// corner singularity, default grading beta = 0.4 at the origin.
inline ManufacturedProblem experiment2() {
    ManufacturedProblem p;
    p.label = "exp2";
    p.mesh_factory = [] { return l_shape_initial_mesh(false); };
    p.nonlinearity = nl_cubic();
    detail::SingularFactors s{
        -4.0 / 3.0,
        [](Point2 q) { return 2.0 * q.x * q.y * (1.0 - q.x * q.x) * (1.0 - q.y * q.y); },
        [](Point2 q) { return 2.0 * q.y * (1.0 - 3.0 * q.x * q.x) * (1.0 - q.y * q.y); },
        [](Point2 q) { return 2.0 * q.x * (1.0 - q.x * q.x) * (1.0 - 3.0 * q.y * q.y); },
        [](Point2 q) { return 12.0 * q.x * q.y * (q.x * q.x + q.y * q.y - 2.0); }};
    p.exact_u = [s](Point2 q) { return s.value(q); };
    p.exact_grad_u = [s](Point2 q) { return s.grad(q); };
    p.f = [s, g = p.nonlinearity.g, u = p.exact_u](Point2 q) {
        return -s.laplacian(q) + g(q, u(q));
    };
    p.grading = detail::origin_grading(0.4);
    return p;
}

// u = r^(-2/3) y (1-x^2)(1-y^2), g(u) = exp(4 |u|^0.9 u), Neumann on the
// segment {0}x(0,1); r^(1/3) singularity, default grading beta = 0.7.
inline ManufacturedProblem experiment3() {
    ManufacturedProblem p;
    p.label = "exp3";
    p.mesh_factory = [] { return l_shape_initial_mesh(true); };
    p.nonlinearity = nl_exp_power(4.0, 0.9);
    detail::SingularFactors s{
        -2.0 / 3.0,
        [](Point2 q) { return q.y * (1.0 - q.x * q.x) * (1.0 - q.y * q.y); },
        [](Point2 q) { return -2.0 * q.x * q.y * (1.0 - q.y * q.y); },
        [](Point2 q) { return (1.0 - q.x * q.x) * (1.0 - 3.0 * q.y * q.y); },
        [](Point2 q) { return -2.0 * q.y * (1.0 - q.y * q.y) - 6.0 * q.y * (1.0 - q.x * q.x); }};
    p.exact_u = [s](Point2 q) { return s.value(q); };
    p.exact_grad_u = [s](Point2 q) { return s.grad(q); };
    p.f = [s, g = p.nonlinearity.g, u = p.exact_u](Point2 q) {
        return -s.laplacian(q) + g(q, u(q));
    };
    p.grading = detail::origin_grading(0.7);
    return p;
}

}  // namespace semfem
