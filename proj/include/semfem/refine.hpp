#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semfem/mesh.hpp"

namespace semfem {

namespace detail {

// Local index of the refinement edge (tri[e], tri[e+1]): the longest edge,
// ties broken by the smaller sorted vertex pair so the choice is deterministic.
inline int refinement_edge(const Mesh& m, int t) {
    const auto& tri = m.triangles[t];
    int best = 0;
    double best_len = -1.0;
    std::pair<int, int> best_key{-1, -1};
    for (int e = 0; e < 3; ++e) {
        int a = tri[e], b = tri[(e + 1) % 3];
        Point2 d = m.vertices[a] - m.vertices[b];
        double len = dot(d, d);
        auto key = edge_key(a, b);
        if (len > best_len || (len == best_len && key < best_key)) {
            best = e;
            best_len = len;
            best_key = key;
        }
    }
    return best;
}

}  // namespace detail

// Red-green-blue refinement: marked triangles are red-split (4 children);
// closure marks further edges until every triangle has either no marked edge
// or its refinement edge marked. Green/blue children are never bisected
// again: re-marking upgrades them to a full red split, so all descendants
// stay within a fixed shape family.
inline Mesh rgb_refine(const Mesh& m, const std::vector<int>& marked) {
    for (int t : marked)
        if (t < 0 || t >= m.n_triangles())
            throw std::invalid_argument("rgb_refine: marked triangle index out of range: " +
                                        std::to_string(t));

    // Edge key -> midpoint vertex index (assigned after the closure fixpoint).
    std::map<std::pair<int, int>, int> marked_edges;
    auto mark = [&](int a, int b) {
        return marked_edges.emplace(detail::edge_key(a, b), -1).second;
    };
    for (int t : marked) {
        const auto& tri = m.triangles[t];
        for (int k = 0; k < 3; ++k) mark(tri[k], tri[(k + 1) % 3]);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < m.n_triangles(); ++t) {
            const auto& tri = m.triangles[t];
            int c = 0;
            for (int k = 0; k < 3; ++k)
                c += static_cast<int>(marked_edges.count(detail::edge_key(tri[k], tri[(k + 1) % 3])));
            if (c == 0 || c == 3) continue;
            if (m.refinement_flags[t] != TriFlag::Plain) {
                for (int k = 0; k < 3; ++k)
                    if (mark(tri[k], tri[(k + 1) % 3])) changed = true;
            } else {
                int e = detail::refinement_edge(m, t);
                if (mark(tri[e], tri[(e + 1) % 3])) changed = true;
            }
        }
    }

    Mesh out;
    out.vertices = m.vertices;
    for (auto& [key, mid] : marked_edges) {
        mid = out.n_vertices();
        out.vertices.push_back(midpoint(m.vertices[key.first], m.vertices[key.second]));
    }
    auto mid_of = [&](int a, int b) -> int {
        auto it = marked_edges.find(detail::edge_key(a, b));
        return it == marked_edges.end() ? -1 : it->second;
    };
    auto emit = [&](int a, int b, int c, TriFlag f) {
        out.triangles.push_back({a, b, c});
        out.refinement_flags.push_back(f);
    };
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        TriFlag f = m.refinement_flags[t];
        int mids[3];
        int c = 0;
        for (int k = 0; k < 3; ++k) {
            mids[k] = mid_of(tri[k], tri[(k + 1) % 3]);
            if (mids[k] >= 0) ++c;
        }
        if (c == 0) {
            emit(tri[0], tri[1], tri[2], f);
        } else if (c == 3) {
            // red: four similar children inherit the parent's flag
            emit(tri[0], mids[0], mids[2], f);
            emit(mids[0], tri[1], mids[1], f);
            emit(mids[2], mids[1], tri[2], f);
            emit(mids[0], mids[1], mids[2], f);
        } else {
            int e = detail::refinement_edge(m, t);
            if (mids[e] < 0) throw std::logic_error("rgb_refine: closure failed");
            int v0 = tri[e], v1 = tri[(e + 1) % 3], v2 = tri[(e + 2) % 3];
            int m01 = mids[e], m12 = mids[(e + 1) % 3], m20 = mids[(e + 2) % 3];
            if (c == 1) {
                // green: bisect through the refinement edge
                emit(v0, m01, v2, TriFlag::Green);
                emit(m01, v1, v2, TriFlag::Green);
            } else if (m12 >= 0) {
                emit(v0, m01, v2, TriFlag::Blue);
                emit(m01, v1, m12, TriFlag::Blue);
                emit(m01, m12, v2, TriFlag::Blue);
            } else {
                emit(v0, m01, m20, TriFlag::Blue);
                emit(m01, v2, m20, TriFlag::Blue);
                emit(m01, v1, v2, TriFlag::Blue);
            }
        }
    }
    for (const auto& be : m.boundary_edges) {
        int mid = mid_of(be.v0, be.v1);
        if (mid < 0) {
            out.boundary_edges.push_back(be);
        } else {
            out.boundary_edges.push_back({be.v0, mid, be.tag});
            out.boundary_edges.push_back({mid, be.v1, be.tag});
        }
    }
    return out;
}

// Pure red refinement of every triangle.
inline Mesh uniform_refine(const Mesh& m) {
    std::vector<int> all(m.n_triangles());
    std::iota(all.begin(), all.end(), 0);
    return rgb_refine(m, all);
}

}  // namespace semfem
