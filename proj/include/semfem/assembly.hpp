#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "semfem/csr.hpp"
#include "semfem/dofmap.hpp"
#include "semfem/mesh.hpp"
#include "semfem/quadrature.hpp"

namespace semfem {

namespace detail {

// Area and constant barycentric-basis gradients of one triangle.
struct ElementGeometry {
    double area = 0.0;
    std::array<Point2, 3> grad{};
};

inline ElementGeometry element_geometry(Point2 p0, Point2 p1, Point2 p2) {
    double a2 = cross(p1 - p0, p2 - p0);  // twice the signed area
    if (!(a2 > 0.0) || !std::isfinite(a2))
        throw std::invalid_argument(
            "element_geometry: degenerate or negatively oriented triangle");
    ElementGeometry g;
    g.area = 0.5 * a2;
    g.grad[0] = {(p1.y - p2.y) / a2, (p2.x - p1.x) / a2};
    g.grad[1] = {(p2.y - p0.y) / a2, (p0.x - p2.x) / a2};
    g.grad[2] = {(p0.y - p1.y) / a2, (p1.x - p0.x) / a2};
    return g;
}

inline ElementGeometry element_geometry(const Mesh& m, int t) {
    const auto& tri = m.triangles[t];
    return element_geometry(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
}

inline Point2 bary_point(const Mesh& m, int t, const std::array<double, 3>& lambda) {
    const auto& tri = m.triangles[t];
    return lambda[0] * m.vertices[tri[0]] + lambda[1] * m.vertices[tri[1]] +
           lambda[2] * m.vertices[tri[2]];
}

}  // namespace detail

// Exact element integral of gradient products of the barycentric basis:
// K_ab = area * grad(lambda_a) . grad(lambda_b). Symmetric, rows sum to 0.
inline std::array<std::array<double, 3>, 3> element_stiffness(Point2 p0, Point2 p1, Point2 p2) {
    auto g = detail::element_geometry(p0, p1, p2);
    std::array<std::array<double, 3>, 3> K{};
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) K[a][b] = K[b][a] = g.area * dot(g.grad[a], g.grad[b]);
    return K;
}

// Stiffness matrix on free dofs; Dirichlet rows and columns are eliminated
// (homogeneous data, so no lifting term enters the right-hand side).
inline CsrMatrix assemble_stiffness(const Mesh& m, const DofMap& dm) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(m.n_triangles()) * 9);
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        auto K = element_stiffness(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
        for (int a = 0; a < 3; ++a) {
            int i = dm.index[tri[a]];
            if (i < 0) continue;
            for (int b = 0; b < 3; ++b) {
                int j = dm.index[tri[b]];
                if (j >= 0) trips.push_back({i, j, K[a][b]});
            }
        }
    }
    return csr_from_triplets(dm.n_free, std::move(trips));
}

// a(u_h, phi_i) for every free dof i, where u_h is given by per-vertex nodal
// values (fixed vertices included); used by tests with inhomogeneous data.
inline std::vector<double> stiffness_apply_nodal(const Mesh& m, const DofMap& dm,
                                                 const std::vector<double>& nodal) {
    if (nodal.size() != m.vertices.size())
        throw std::invalid_argument("stiffness_apply_nodal: nodal vector size mismatch");
    std::vector<double> out(dm.n_free, 0.0);
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        auto K = element_stiffness(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]);
        for (int a = 0; a < 3; ++a) {
            int i = dm.index[tri[a]];
            if (i < 0) continue;
            double s = 0.0;
            for (int b = 0; b < 3; ++b) s += K[a][b] * nodal[tri[b]];
            out[i] += s;
        }
    }
    return out;
}

// Load vector: l(phi_i) = sum_T area(T) sum_q w_q f(x_q) phi_i(x_q).
template <class F>
inline std::vector<double> assemble_load(const Mesh& m, const DofMap& dm, F&& f,
                                         const QuadRule& rule) {
    std::vector<double> load(dm.n_free, 0.0);
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        double area = m.triangle_area(t);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            Point2 p = detail::bary_point(m, t, rule.points[q]);
            double fv = f(p);
            if (!std::isfinite(fv))
                throw std::runtime_error("assemble_load: non-finite source value at (" +
                                         std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
            double w = area * rule.weights[q] * fv;
            for (int a = 0; a < 3; ++a) {
                int i = dm.index[tri[a]];
                if (i >= 0) load[i] += w * rule.points[q][a];
            }
        }
    }
    return load;
}

// Semilinear form vector: b(U; phi_i) with U evaluated at quadrature points
// by barycentric interpolation of its nodal values. Must use the same rule
// as assemble_load for the patch-test identity to hold.
template <class G>
inline std::vector<double> assemble_semilinear(const Mesh& m, const DofMap& dm, G&& g,
                                               const std::vector<double>& U,
                                               const QuadRule& rule) {
    if (static_cast<int>(U.size()) != dm.n_free)
        throw std::invalid_argument("assemble_semilinear: coefficient vector size mismatch");
    std::vector<double> b(dm.n_free, 0.0);
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        double area = m.triangle_area(t);
        double u0 = dm.nodal(tri[0], U), u1 = dm.nodal(tri[1], U), u2 = dm.nodal(tri[2], U);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& lam = rule.points[q];
            Point2 p = detail::bary_point(m, t, lam);
            double uq = lam[0] * u0 + lam[1] * u1 + lam[2] * u2;
            double gv = g(p, uq);
            if (!std::isfinite(gv))
                throw std::overflow_error("assemble_semilinear: non-finite reaction value for u=" +
                                          std::to_string(uq));
            double w = area * rule.weights[q] * gv;
            for (int a = 0; a < 3; ++a) {
                int i = dm.index[tri[a]];
                if (i >= 0) b[i] += w * lam[a];
            }
        }
    }
    return b;
}

// H1 seminorm of the discrete function with the given per-vertex values.
inline double h1_seminorm_nodal(const Mesh& m, const std::vector<double>& nodal) {
    double s = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        auto g = detail::element_geometry(m, t);
        Point2 grad{0.0, 0.0};
        for (int a = 0; a < 3; ++a) grad = grad + nodal[tri[a]] * g.grad[a];
        s += g.area * dot(grad, grad);
    }
    return std::sqrt(s);
}

// sqrt(U^T A U), computed element-wise without assembling A.
inline double eval_h1_seminorm(const Mesh& m, const DofMap& dm, const std::vector<double>& U) {
    return h1_seminorm_nodal(m, nodal_values(m, dm, U));
}

}  // namespace semfem
