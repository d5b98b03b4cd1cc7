#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semfem/analysis.hpp"
#include "semfem/grading.hpp"
#include "semfem/mesh.hpp"
#include "semfem/mesh_io.hpp"
#include "semfem/multilevel.hpp"
#include "semfem/picard.hpp"
#include "semfem/problems.hpp"
#include "semfem/refine.hpp"

namespace semfem {

enum class ExperimentId { Exp1, Exp2, Exp3 };
enum class MeshMode { Uniform, Graded };

// Everything is deterministic: no seeds, no environment dependence.
struct RunConfig {
    ExperimentId experiment = ExperimentId::Exp1;
    MeshMode mesh_mode = MeshMode::Uniform;
    double beta = 0.0;           // grading exponent at the re-entrant corner
    int levels = 8;              // uniform mode: number of meshes (initial mesh included)
    std::vector<double> h_list;  // graded mode: decreasing target mesh sizes
    double alpha = 0.8;
    int gamma = 4;
    double slope_threshold = -0.49;
    double target_err = 2e-2;  // optimize-alpha objective target
    double budget_log_base = std::exp(1.0);
    std::string out_path;  // empty: CSV goes to stdout
};

inline ManufacturedProblem make_problem(ExperimentId id) {
    switch (id) {
        case ExperimentId::Exp1: return experiment1();
        case ExperimentId::Exp2: return experiment2();
        default: return experiment3();
    }
}

// Desk-scale defaults (dof counts capped near 1e5); --levels / --h-list
// raise the cap to the full study.
inline RunConfig default_config(ExperimentId id) {
    RunConfig cfg;
    cfg.experiment = id;
    switch (id) {
        case ExperimentId::Exp1:
            cfg.mesh_mode = MeshMode::Uniform;
            cfg.beta = 0.0;
            cfg.levels = 8;
            cfg.alpha = 0.8;
            cfg.gamma = 4;
            break;
        case ExperimentId::Exp2:
            cfg.mesh_mode = MeshMode::Graded;
            cfg.beta = 0.4;
            // default depth keeps N near 1e5; --h-list extends the sequence
            cfg.h_list = {0.25, 0.15, 0.08, 0.035, 0.016};
            cfg.alpha = 0.8;
            cfg.gamma = 4;
            break;
        case ExperimentId::Exp3:
            cfg.mesh_mode = MeshMode::Graded;
            cfg.beta = 0.7;
            cfg.h_list = {0.25, 0.15, 0.08, 0.035, 0.016};
            cfg.alpha = 0.5;
            cfg.gamma = 2;
            break;
    }
    return cfg;
}

inline std::vector<Mesh> build_mesh_sequence(const ManufacturedProblem& prob,
                                             const RunConfig& cfg) {
    Mesh m0 = prob.mesh_factory();
    std::vector<Mesh> seq;
    if (cfg.mesh_mode == MeshMode::Uniform) {
        if (cfg.levels < 1) throw std::invalid_argument("run: need at least one level");
        seq.push_back(m0);
        for (int k = 1; k < cfg.levels; ++k) seq.push_back(uniform_refine(seq.back()));
    } else {
        if (cfg.h_list.empty()) throw std::invalid_argument("run: graded mode needs an h list");
        for (std::size_t k = 1; k < cfg.h_list.size(); ++k)
            if (!(cfg.h_list[k] < cfg.h_list[k - 1]))
                throw std::invalid_argument("run: h list must be strictly decreasing");
        GradingSpec spec = prob.grading;
        if (spec.corners.empty()) spec.corners = {{{0.0, 0.0}, cfg.beta}};
        spec.corners[0].beta = cfg.beta;
        for (double h : cfg.h_list) {
            spec.h = h;
            seq.push_back(grade_to(m0, spec));
        }
    }
    return seq;
}

namespace detail {

inline std::string fmt_g10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Writes to the path, or to stdout when the path is empty.
inline bool emit_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.flush();
    if (!out.good()) {
        std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
        return false;
    }
    return true;
}

}  // namespace detail

inline std::string render_run_csv(const std::vector<LevelRecord>& records) {
    std::string csv = "level,h,N,iterations,err_h1,eoc\n";
    for (const auto& r : records) {
        csv += std::to_string(r.level) + "," + detail::fmt_g10(r.h) + "," +
               std::to_string(r.n_dofs) + "," + std::to_string(r.n_iters) + "," +
               detail::fmt_g10(r.err_h1) + ",";
        if (r.eoc) csv += detail::fmt_g10(*r.eoc);
        csv += "\n";
    }
    return csv;
}

inline int cmd_run(const RunConfig& cfg) {
    try {
        ManufacturedProblem prob = make_problem(cfg.experiment);
        std::vector<Mesh> seq = build_mesh_sequence(prob, cfg);
        PicardConfig pc;
        pc.alpha = cfg.alpha;
        pc.gamma = cfg.gamma;
        MultilevelOptions opts;
        opts.budget_log_base = cfg.budget_log_base;
        auto records = multilevel_run(prob, seq, pc, cfg.gamma, cfg.slope_threshold, opts);
        if (!detail::emit_text(cfg.out_path, render_run_csv(records))) return 1;
        long total = 0;
        for (const auto& r : records) total += r.n_iters;
        std::printf("total iterations: %ld\n", total);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

inline int cmd_optimize_alpha(const RunConfig& cfg) {
    try {
        ManufacturedProblem prob = make_problem(cfg.experiment);
        std::vector<Mesh> seq = build_mesh_sequence(prob, cfg);
        auto objective = alpha_objective(prob, seq.back(), cfg.target_err, cfg.gamma,
                                         cfg.budget_log_base);
        AlphaSearchResult res = golden_section(objective, 0.0, 1.0, 1e-3);
        std::string csv = "probe,alpha,objective\n";
        for (std::size_t i = 0; i < res.trace.size(); ++i)
            csv += std::to_string(i) + "," + detail::fmt_g10(res.trace[i].alpha) + "," +
                   detail::fmt_g10(res.trace[i].objective) + "\n";
        if (!detail::emit_text(cfg.out_path, csv)) return 1;
        std::printf("alpha_opt = %s (objective = %s)\n", detail::fmt_g10(res.alpha_opt).c_str(),
                    detail::fmt_g10(res.objective_at_opt).c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

// One multilevel run per grid sample. A sample diverges when the iteration
// blows up or when a level past the first exhausts its budget without
// reaching the rate criterion; diverged rows record the sentinel
// (total budget + 1e6), unmistakably above any within-budget count.
inline int cmd_sweep_alpha(const RunConfig& cfg, double grid_lo, double grid_hi,
                           double grid_step) {
    try {
        if (!(grid_step > 0.0) || !(grid_lo <= grid_hi) || !(grid_lo > 0.0) || grid_hi > 1.0)
            throw std::invalid_argument("sweep-alpha: need 0 < grid-lo <= grid-hi <= 1 and step > 0");
        ManufacturedProblem prob = make_problem(cfg.experiment);
        std::vector<Mesh> seq = build_mesh_sequence(prob, cfg);
        double total_budget = 0.0;
        for (const auto& m : seq)
            total_budget += iteration_budget(build_dofmap(m).n_free, cfg.gamma,
                                             cfg.budget_log_base);
        MultilevelOptions opts;
        opts.budget_log_base = cfg.budget_log_base;
        std::string csv = "alpha,total_iterations\n";
        for (int k = 0;; ++k) {
            double a = grid_lo + k * grid_step;
            if (a > grid_hi + 1e-9) break;
            PicardConfig pc;
            pc.alpha = a;
            pc.gamma = cfg.gamma;
            double total = 0.0;
            try {
                auto records = multilevel_run(prob, seq, pc, cfg.gamma, cfg.slope_threshold, opts);
                bool capped = false;
                for (std::size_t i = 1; i < records.size(); ++i)
                    capped = capped || records[i].stop_reason == StopReason::Budget;
                if (capped)
                    total = total_budget + 1e6;
                else
                    for (const auto& r : records) total += r.n_iters;
            } catch (const DivergenceError&) {
                total = total_budget + 1e6;
            } catch (const std::overflow_error&) {
                total = total_budget + 1e6;
            }
            csv += detail::fmt_g10(a) + "," + detail::fmt_g10(total) + "\n";
        }
        if (!detail::emit_text(cfg.out_path, csv)) return 1;
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

inline int cmd_mesh(double beta, double h, const std::string& out_path) {
    try {
        GradingSpec spec;
        spec.corners = {{{0.0, 0.0}, beta}};
        spec.h = h;
        Mesh m = grade_to(l_shape_initial_mesh(false), spec);
        std::ofstream out(out_path, std::ios::binary);
        out << export_mesh(m);
        out.flush();
        if (!out.good()) throw std::runtime_error("cannot write " + out_path);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace semfem
