#pragma once

#include <vector>

#include "semfem/mesh.hpp"

namespace semfem {

// Per-vertex classification: free dofs carry an index in 0..n_free-1, fixed
// vertices carry a prescribed value (0 for homogeneous Dirichlet; tests may
// impose nonzero values through fixed_value directly).
struct DofMap {
    std::vector<int> index;           // free dof index, or -1 if fixed
    std::vector<double> fixed_value;  // prescribed value where fixed, else 0
    int n_free = 0;

    bool is_free(int v) const { return index[v] >= 0; }
    double nodal(int v, const std::vector<double>& U) const {
        return index[v] >= 0 ? U[index[v]] : fixed_value[v];
    }
};

// Vertices on any Dirichlet-tagged edge are fixed at 0; all other vertices,
// including Neumann-boundary ones, are free and numbered in vertex order.
inline DofMap build_dofmap(const Mesh& m) {
    DofMap dm;
    dm.index.assign(m.vertices.size(), -1);
    dm.fixed_value.assign(m.vertices.size(), 0.0);
    std::vector<char> fixed(m.vertices.size(), 0);
    for (const auto& be : m.boundary_edges) {
        if (be.tag == BoundaryTag::Dirichlet) {
            fixed[be.v0] = 1;
            fixed[be.v1] = 1;
        }
    }
    int next = 0;
    for (int v = 0; v < m.n_vertices(); ++v)
        if (!fixed[v]) dm.index[v] = next++;
    dm.n_free = next;
    return dm;
}

// Expands free coefficients to a per-vertex vector, filling in fixed values.
inline std::vector<double> nodal_values(const Mesh& m, const DofMap& dm,
                                        const std::vector<double>& U) {
    std::vector<double> out(m.vertices.size());
    for (int v = 0; v < m.n_vertices(); ++v) out[v] = dm.nodal(v, U);
    return out;
}

}  // namespace semfem
