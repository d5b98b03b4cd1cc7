#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semfem/geometry.hpp"

namespace semfem {

enum class BoundaryTag { Dirichlet, Neumann };

// Refinement lineage of a triangle. Green/Blue children may only be
// red-refined later; this keeps the shape family finite.
enum class TriFlag { Plain, Green, Blue };

struct BoundaryEdge {
    int v0 = -1;
    int v1 = -1;
    BoundaryTag tag = BoundaryTag::Dirichlet;
};

struct Mesh {
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW vertex indices
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<TriFlag> refinement_flags;  // one per triangle

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    double triangle_area(int t) const {
        const auto& tri = triangles[t];
        return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    }
    double triangle_diam(int t) const {
        const auto& tri = triangles[t];
        return triangle_diameter(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    }
    Point2 barycenter(int t) const {
        const auto& tri = triangles[t];
        Point2 s = vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]];
        return {s.x / 3.0, s.y / 3.0};
    }
};

inline double total_area(const Mesh& m) {
    double a = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) a += m.triangle_area(t);
    return a;
}

// Longest edge over all triangles.
inline double mesh_size(const Mesh& m) {
    double h = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) h = std::max(h, m.triangle_diam(t));
    return h;
}

inline double mesh_min_angle(const Mesh& m) {
    double a = 4.0;
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        a = std::min(a, triangle_min_angle(m.vertices[tri[0]], m.vertices[tri[1]],
                                           m.vertices[tri[2]]));
    }
    return a;
}

namespace detail {
inline std::pair<int, int> edge_key(int a, int b) {
    return {std::min(a, b), std::max(a, b)};
}
}  // namespace detail

// Checks conformity: positive CCW areas, finite coordinates, every interior
// edge shared by exactly two triangles, boundary edge list matching the
// single-adjacency edges exactly. Throws std::runtime_error on violation.
inline void validate_mesh(const Mesh& m) {
    if (m.refinement_flags.size() != m.triangles.size())
        throw std::runtime_error("validate_mesh: refinement_flags size mismatch");
    for (int v = 0; v < m.n_vertices(); ++v) {
        if (!std::isfinite(m.vertices[v].x) || !std::isfinite(m.vertices[v].y))
            throw std::runtime_error("validate_mesh: non-finite vertex coordinate at vertex " +
                                     std::to_string(v));
    }
    std::map<std::pair<int, int>, int> edge_count;
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= m.n_vertices())
                throw std::runtime_error("validate_mesh: vertex index out of range in triangle " +
                                         std::to_string(t));
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0])
            throw std::runtime_error("validate_mesh: repeated vertex in triangle " +
                                     std::to_string(t));
        if (!(m.triangle_area(t) > 0.0))
            throw std::runtime_error("validate_mesh: non-positive area in triangle " +
                                     std::to_string(t));
        for (int k = 0; k < 3; ++k)
            edge_count[detail::edge_key(tri[k], tri[(k + 1) % 3])] += 1;
    }
    std::map<std::pair<int, int>, int> boundary_seen;
    for (const auto& be : m.boundary_edges) {
        if (be.v0 < 0 || be.v0 >= m.n_vertices() || be.v1 < 0 || be.v1 >= m.n_vertices() ||
            be.v0 == be.v1)
            throw std::runtime_error("validate_mesh: invalid boundary edge");
        boundary_seen[detail::edge_key(be.v0, be.v1)] += 1;
    }
    for (const auto& [key, cnt] : edge_count) {
        if (cnt > 2)
            throw std::runtime_error("validate_mesh: edge shared by more than two triangles");
        bool on_boundary = boundary_seen.count(key) > 0;
        if (cnt == 1 && !on_boundary)
            throw std::runtime_error("validate_mesh: hanging edge not in boundary list");
        if (cnt == 2 && on_boundary)
            throw std::runtime_error("validate_mesh: interior edge tagged as boundary");
    }
    for (const auto& [key, cnt] : boundary_seen) {
        if (cnt != 1)
            throw std::runtime_error("validate_mesh: duplicate boundary edge");
        auto it = edge_count.find(key);
        if (it == edge_count.end())
            throw std::runtime_error("validate_mesh: boundary edge not an edge of any triangle");
    }
}

inline int count_edges(const Mesh& m) {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& tri : m.triangles)
        for (int k = 0; k < 3; ++k) edges[detail::edge_key(tri[k], tri[(k + 1) % 3])] = 1;
    return static_cast<int>(edges.size());
}

// Initial triangulation of the L-shaped domain (-1,1)^2 \ [-1,0]x[0,1]:
// each of the three unit squares is fanned into 4 triangles around its
// center, giving 11 vertices, 12 triangles and 8 boundary edges.
// With mixed_bc the segment {0}x(0,1) is tagged Neumann, all else Dirichlet.
inline Mesh l_shape_initial_mesh(bool mixed_bc = false) {
    Mesh m;
    m.vertices = {
        {0.0, 0.0},   // 0: re-entrant corner
        {1.0, 0.0},   // 1
        {1.0, 1.0},   // 2
        {0.0, 1.0},   // 3
        {-1.0, 0.0},  // 4
        {-1.0, -1.0}, // 5
        {0.0, -1.0},  // 6
        {1.0, -1.0},  // 7
        {0.5, 0.5},   // 8: center, first quadrant
        {-0.5, -0.5}, // 9: center, third quadrant
        {0.5, -0.5},  // 10: center, fourth quadrant
    };
    m.triangles = {
        {0, 1, 8}, {1, 2, 8}, {2, 3, 8}, {3, 0, 8},
        {5, 6, 9}, {6, 0, 9}, {0, 4, 9}, {4, 5, 9},
        {6, 7, 10}, {7, 1, 10}, {1, 0, 10}, {0, 6, 10},
    };
    BoundaryTag crack = mixed_bc ? BoundaryTag::Neumann : BoundaryTag::Dirichlet;
    m.boundary_edges = {
        {0, 3, crack},
        {3, 2, BoundaryTag::Dirichlet},
        {2, 1, BoundaryTag::Dirichlet},
        {1, 7, BoundaryTag::Dirichlet},
        {7, 6, BoundaryTag::Dirichlet},
        {6, 5, BoundaryTag::Dirichlet},
        {5, 4, BoundaryTag::Dirichlet},
        {4, 0, BoundaryTag::Dirichlet},
    };
    m.refinement_flags.assign(m.triangles.size(), TriFlag::Plain);
    return m;
}

}  // namespace semfem
