#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "semfem/analysis.hpp"
#include "semfem/assembly.hpp"
#include "semfem/dofmap.hpp"
#include "semfem/mesh.hpp"
#include "semfem/picard.hpp"
#include "semfem/problems.hpp"

namespace semfem {

struct LevelRecord {
    int level = 0;
    double h = 0.0;  // measured mesh size (largest triangle diameter)
    int n_dofs = 0;
    int n_iters = 0;
    double err_h1 = 0.0;
    std::optional<double> eoc;  // vs previous level; empty on the first
    // Budget on the first level always (no slope reference exists there);
    // Budget on a later level means the rate criterion was never reached.
    StopReason stop_reason = StopReason::Budget;
};

struct MultilevelOptions {
    bool prolongate_u0 = false;  // off: U0 = 0 on every level
    double budget_log_base = std::exp(1.0);
};

namespace detail {

// Evaluates the coarse piecewise-linear function (per-vertex values) at every
// vertex of the fine mesh. Point location uses a uniform bucket grid; points
// on element boundaries resolve to the triangle with the largest minimum
// barycentric coordinate, clamped for roundoff.
inline std::vector<double> prolongate_nodal(const Mesh& cm, const std::vector<double>& cnodal,
                                            const Mesh& fm) {
    double xmin = cm.vertices[0].x, xmax = xmin, ymin = cm.vertices[0].y, ymax = ymin;
    for (const auto& p : cm.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    int grid = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(cm.n_triangles()))));
    double dx = (xmax - xmin) / grid, dy = (ymax - ymin) / grid;
    if (dx <= 0.0) dx = 1.0;
    if (dy <= 0.0) dy = 1.0;
    auto cell_of = [&](double v, double lo, double dv) {
        int c = static_cast<int>((v - lo) / dv);
        return std::clamp(c, 0, grid - 1);
    };
    std::vector<std::vector<int>> buckets(static_cast<std::size_t>(grid) * grid);
    for (int t = 0; t < cm.n_triangles(); ++t) {
        const auto& tri = cm.triangles[t];
        double txmin = cm.vertices[tri[0]].x, txmax = txmin;
        double tymin = cm.vertices[tri[0]].y, tymax = tymin;
        for (int k = 1; k < 3; ++k) {
            txmin = std::min(txmin, cm.vertices[tri[k]].x);
            txmax = std::max(txmax, cm.vertices[tri[k]].x);
            tymin = std::min(tymin, cm.vertices[tri[k]].y);
            tymax = std::max(tymax, cm.vertices[tri[k]].y);
        }
        for (int cx = cell_of(txmin, xmin, dx); cx <= cell_of(txmax, xmin, dx); ++cx)
            for (int cy = cell_of(tymin, ymin, dy); cy <= cell_of(tymax, ymin, dy); ++cy)
                buckets[static_cast<std::size_t>(cx) * grid + cy].push_back(t);
    }

    std::vector<double> out(fm.vertices.size(), 0.0);
    for (std::size_t v = 0; v < fm.vertices.size(); ++v) {
        Point2 p = fm.vertices[v];
        int best_t = -1;
        double best_min_bary = -1e300;
        std::array<double, 3> best_lam{};
        for (int ring = 0; ring < grid && best_min_bary < -1e-9; ++ring) {
            int cx = cell_of(p.x, xmin, dx), cy = cell_of(p.y, ymin, dy);
            for (int gx = std::max(0, cx - ring); gx <= std::min(grid - 1, cx + ring); ++gx) {
                for (int gy = std::max(0, cy - ring); gy <= std::min(grid - 1, cy + ring); ++gy) {
                    if (ring > 0 && std::max(std::abs(gx - cx), std::abs(gy - cy)) != ring)
                        continue;
                    for (int t : buckets[static_cast<std::size_t>(gx) * grid + gy]) {
                        const auto& tri = cm.triangles[t];
                        Point2 a = cm.vertices[tri[0]], b = cm.vertices[tri[1]],
                               c = cm.vertices[tri[2]];
                        double area = signed_area(a, b, c);
                        std::array<double, 3> lam = {signed_area(p, b, c) / area,
                                                     signed_area(a, p, c) / area,
                                                     signed_area(a, b, p) / area};
                        double mn = std::min({lam[0], lam[1], lam[2]});
                        if (mn > best_min_bary) {
                            best_min_bary = mn;
                            best_t = t;
                            best_lam = lam;
                        }
                    }
                }
            }
        }
        if (best_t < 0) continue;  // empty coarse mesh; keep zero
        double s = 0.0, val = 0.0;
        for (int k = 0; k < 3; ++k) {
            double l = std::max(0.0, best_lam[k]);
            val += l * cnodal[cm.triangles[best_t][k]];
            s += l;
        }
        out[v] = val / s;
    }
    return out;
}

}  // namespace detail

// Sweeps the mesh sequence coarse to fine. On each level: assemble, start
// from U0 = 0 (or the prolongated previous iterate when opted in), iterate
// with budget gamma*ceil(log N); after every step the H1 error is measured
// and the level stops early once the slope vs the previous level's final
// error drops below slope_threshold. The first level runs on budget alone.
inline std::vector<LevelRecord> multilevel_run(const ManufacturedProblem& prob,
                                               const std::vector<Mesh>& mesh_seq,
                                               const PicardConfig& cfg, int gamma,
                                               double slope_threshold,
                                               const MultilevelOptions& opts = {}) {
    validate(cfg);
    if (mesh_seq.empty()) throw std::invalid_argument("multilevel_run: empty mesh sequence");

    const QuadRule assembly_rule = midpoint_rule();
    const QuadRule error_rule = order5_rule();
    std::vector<LevelRecord> records;
    int prev_n = 0;
    double prev_err = 0.0;
    std::vector<double> prev_nodal;
    const Mesh* prev_mesh = nullptr;

    for (std::size_t k = 0; k < mesh_seq.size(); ++k) {
        const Mesh& m = mesh_seq[k];
        DofMap dm = build_dofmap(m);
        if (k > 0 && dm.n_free <= prev_n)
            throw std::invalid_argument("multilevel_run: dof count must increase along the sequence");
        CsrMatrix A = assemble_stiffness(m, dm);
        std::vector<double> load = assemble_load(m, dm, prob.f, assembly_rule);
        auto b_of = [&](const std::vector<double>& U) {
            return assemble_semilinear(m, dm, prob.nonlinearity.g, U, assembly_rule);
        };
        int budget = iteration_budget(dm.n_free, gamma, opts.budget_log_base);

        std::vector<double> U0(dm.n_free, 0.0);
        if (opts.prolongate_u0 && prev_mesh) {
            std::vector<double> fine_nodal = detail::prolongate_nodal(*prev_mesh, prev_nodal, m);
            for (int v = 0; v < m.n_vertices(); ++v)
                if (dm.index[v] >= 0) U0[dm.index[v]] = fine_nodal[v];
        }

        double level_err = h1_error(m, dm, U0, prob.exact_grad_u, error_rule);
        double ln_ratio = k > 0 ? std::log(static_cast<double>(dm.n_free) / prev_n) : 1.0;
        auto observer = [&](int, const std::vector<double>& U, double) {
            level_err = h1_error(m, dm, U, prob.exact_grad_u, error_rule);
            if (k == 0) return true;
            double slope = std::log(level_err / prev_err) / ln_ratio;
            return !(slope < slope_threshold);
        };
        IterationResult res = picard_solve(A, load, b_of, std::move(U0), cfg, budget, observer);

        LevelRecord rec;
        rec.level = static_cast<int>(k);
        rec.h = mesh_size(m);
        rec.n_dofs = dm.n_free;
        rec.n_iters = res.n_iters;
        rec.err_h1 = level_err;
        if (k > 0) rec.eoc = std::log(level_err / prev_err) / ln_ratio;
        rec.stop_reason = res.stop_reason;
        records.push_back(rec);

        prev_n = dm.n_free;
        prev_err = level_err;
        prev_mesh = &m;
        if (opts.prolongate_u0) prev_nodal = nodal_values(m, dm, res.U);
    }
    return records;
}

}  // namespace semfem
