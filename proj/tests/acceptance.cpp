// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Optional arguments select criteria by number (default: all).
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "semfem/analysis.hpp"
#include "semfem/assembly.hpp"
#include "semfem/cg.hpp"
#include "semfem/cli.hpp"
#include "semfem/dofmap.hpp"
#include "semfem/mesh.hpp"
#include "semfem/multilevel.hpp"
#include "semfem/nonlinearity.hpp"
#include "semfem/picard.hpp"
#include "semfem/problems.hpp"
#include "semfem/quadrature.hpp"
#include "semfem/refine.hpp"

using namespace semfem;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

Mesh refined_l_shape(int k, bool mixed = false) {
    Mesh m = l_shape_initial_mesh(mixed);
    for (int r = 0; r < k; ++r) m = uniform_refine(m);
    return m;
}

std::vector<LevelRecord> run_levels(const ManufacturedProblem& prob, const RunConfig& cfg) {
    std::vector<Mesh> seq = build_mesh_sequence(prob, cfg);
    PicardConfig pc;
    pc.alpha = cfg.alpha;
    pc.gamma = cfg.gamma;
    return multilevel_run(prob, seq, pc, cfg.gamma, cfg.slope_threshold);
}

// Gaussian elimination with partial pivoting; the independent linear oracle.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            double f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Per-element cotangent formula, assembled densely over free dofs.
std::vector<std::vector<double>> dense_stiffness_oracle(const Mesh& m, const DofMap& dm) {
    std::vector<std::vector<double>> a(dm.n_free, std::vector<double>(dm.n_free, 0.0));
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        Point2 p[3] = {m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]};
        double cot[3];
        for (int k = 0; k < 3; ++k) {
            Point2 u = p[(k + 1) % 3] - p[k], v = p[(k + 2) % 3] - p[k];
            cot[k] = dot(u, v) / cross(u, v);
        }
        for (int k = 0; k < 3; ++k) {
            int i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
            double w = 0.5 * cot[k];
            int fi = dm.index[i], fj = dm.index[j];
            if (fi >= 0 && fj >= 0) {
                a[fi][fj] -= w;
                a[fj][fi] -= w;
            }
            if (fi >= 0) a[fi][fi] += w;
            if (fj >= 0) a[fj][fj] += w;
        }
    }
    return a;
}

double ref_monomial_quad(const QuadRule& rule, int i, int j) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        double x = rule.points[q][1], y = rule.points[q][2];
        s += rule.weights[q] * std::pow(x, i) * std::pow(y, j);
    }
    return 0.5 * s;
}

double ref_monomial_exact(int i, int j) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    };
    return fact(i) * fact(j) / fact(i + j + 2);
}

bool crit1_exp1_rate(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = default_config(ExperimentId::Exp1);  // uniform, 8 levels, a=0.8, g=4
    auto rec = run_levels(experiment1(), cfg);
    double e6 = *rec[rec.size() - 2].eoc, e7 = *rec[rec.size() - 1].eoc;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("N=%d, last eoc %.3f, %.3f (band [-0.60,-0.45]), %.0fs", rec.back().n_dofs, e6,
                 e7, secs);
    return in_band(e6, -0.60, -0.45) && in_band(e7, -0.60, -0.45);
}

bool crit2_exp2_graded_vs_uniform(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    ManufacturedProblem prob = experiment2();
    RunConfig graded = default_config(ExperimentId::Exp2);
    auto rg = run_levels(prob, graded);
    double g1 = *rg[rg.size() - 2].eoc, g2 = *rg[rg.size() - 1].eoc;

    RunConfig uni = default_config(ExperimentId::Exp2);
    uni.mesh_mode = MeshMode::Uniform;
    uni.levels = 7;
    uni.h_list.clear();
    auto ru = run_levels(prob, uni);
    double u1 = *ru[ru.size() - 2].eoc, u2 = *ru[ru.size() - 1].eoc;

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("graded N=%d eoc %.3f, %.3f (-0.5 +- 0.07); uniform N=%d eoc %.3f, %.3f "
                 "(-1/3 +- 0.07), %.0fs",
                 rg.back().n_dofs, g1, g2, ru.back().n_dofs, u1, u2, secs);
    const double third = -1.0 / 3.0;
    return in_band(g1, -0.57, -0.43) && in_band(g2, -0.57, -0.43) &&
           in_band(u1, third - 0.07, third + 0.07) && in_band(u2, third - 0.07, third + 0.07);
}

bool crit3_exp3_rate(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = default_config(ExperimentId::Exp3);  // graded b=0.7, a=0.5, g=2
    auto rec = run_levels(experiment3(), cfg);
    double e1 = *rec[rec.size() - 2].eoc, e2 = *rec[rec.size() - 1].eoc;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("N=%d, last eoc %.3f, %.3f (band [-0.57,-0.43]), %.0fs", rec.back().n_dofs, e1,
                 e2, secs);
    return in_band(e1, -0.57, -0.43) && in_band(e2, -0.57, -0.43);
}

bool crit4_beta_bounds(std::string& detail) {
    double omega = 1.5 * std::numbers::pi;
    double dd = beta_min(omega, CornerKind::DirichletDirichlet);
    double dn = beta_min(omega, CornerKind::DirichletNeumann);
    detail = fmt("beta_min(3pi/2, DD) = %.17g, beta_min(3pi/2, DN) = %.17g", dd, dn);
    return dd == 1.0 / 3.0 && dn == 2.0 / 3.0;
}

bool crit5_patch_test(std::string& detail) {
    double worst = 0.0;
    struct Lin {
        double a, b, c;
    };
    for (Lin L : {Lin{0.3, -0.7, 0.2}, Lin{-0.5, 0.25, -0.125}}) {
        auto u_lin = [L](Point2 p) { return L.a * p.x + L.b * p.y + L.c; };
        for (const Nonlinearity& nl : {nl_exp(), nl_cubic()}) {
            for (int k : {0, 2}) {
                Mesh m = refined_l_shape(k);
                DofMap dm = build_dofmap(m);
                std::vector<double> U(dm.n_free);
                for (int v = 0; v < m.n_vertices(); ++v) {
                    if (dm.is_free(v))
                        U[dm.index[v]] = u_lin(m.vertices[v]);
                    else
                        dm.fixed_value[v] = u_lin(m.vertices[v]);
                }
                auto f = [&](Point2 p) { return nl.g(p, u_lin(p)); };
                auto stiff = stiffness_apply_nodal(m, dm, nodal_values(m, dm, U));
                auto b = assemble_semilinear(m, dm, nl.g, U, midpoint_rule());
                auto l = assemble_load(m, dm, f, midpoint_rule());
                for (int i = 0; i < dm.n_free; ++i)
                    worst = std::max(worst, std::abs(stiff[i] + b[i] - l[i]));
            }
        }
    }
    detail = fmt("max residual %.3g (bound 1e-10)", worst);
    return worst <= 1e-10;
}

bool crit6_contraction(std::string& detail) {
    ManufacturedProblem prob = experiment1();
    Mesh m = refined_l_shape(3);  // fixed mesh, 353 dofs
    DofMap dm = build_dofmap(m);
    CsrMatrix A = assemble_stiffness(m, dm);
    QuadRule rule = midpoint_rule();
    auto load = assemble_load(m, dm, prob.f, rule);
    auto b_of = [&](const std::vector<double>& U) {
        return assemble_semilinear(m, dm, prob.nonlinearity.g, U, rule);
    };
    detail.clear();
    bool ok = true;
    for (double alpha : {0.3, 0.5, 0.8}) {
        PicardConfig cfg;
        cfg.alpha = alpha;
        IterationResult res =
            picard_solve(A, load, b_of, std::vector<double>(dm.n_free, 0.0), cfg, 12);
        double worst_ratio = 0.0;
        for (double r : res.measured_contraction) worst_ratio = std::max(worst_ratio, r);
        for (std::size_t i = 1; i < res.increment_history.size(); ++i)
            ok = ok && res.increment_history[i] < res.increment_history[i - 1];
        ok = ok && worst_ratio < 1.0;
        detail += fmt("a=%.1f max ratio %.3f; ", alpha, worst_ratio);
    }
    detail += "(strict decrease over 12 steps)";
    return ok;
}

bool crit7_quadrature(std::string& detail) {
    double worst2 = 0.0, worst5 = 0.0;
    QuadRule mid = midpoint_rule(), o5 = order5_rule();
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; i + j <= 5; ++j) {
            double exact = ref_monomial_exact(i, j);
            if (i + j <= 2)
                worst2 = std::max(worst2, std::abs(ref_monomial_quad(mid, i, j) - exact));
            worst5 = std::max(worst5, std::abs(ref_monomial_quad(o5, i, j) - exact));
        }
    detail = fmt("midpoint worst %.3g (deg <= 2), order-5 worst %.3g (deg <= 5), bound 1e-14",
                 worst2, worst5);
    return worst2 <= 1e-14 && worst5 <= 1e-14;
}

bool crit8_oracles(std::string& detail) {
    // cg_solve vs dense elimination on the level-2 system (81 dofs)
    ManufacturedProblem prob = experiment1();
    Mesh m = refined_l_shape(2);
    DofMap dm = build_dofmap(m);
    CsrMatrix A = assemble_stiffness(m, dm);
    auto b = assemble_load(m, dm, prob.f, midpoint_rule());
    std::vector<std::vector<double>> Ad(dm.n_free, std::vector<double>(dm.n_free));
    for (int i = 0; i < dm.n_free; ++i)
        for (int j = 0; j < dm.n_free; ++j) Ad[i][j] = A.coeff(i, j);
    auto xd = dense_solve(Ad, b);
    auto xc = cg_solve(A, b, 1e-12, 100000);
    double solver_diff = 0.0;
    for (int i = 0; i < dm.n_free; ++i)
        solver_diff = std::max(solver_diff, std::abs(xd[i] - xc[i]));

    // assembled stiffness vs per-element cotangent oracle on small meshes
    double asm_diff = 0.0;
    for (int k : {0, 1}) {  // 12 and 48 triangles
        Mesh mk = refined_l_shape(k);
        DofMap dk = build_dofmap(mk);
        CsrMatrix Ak = assemble_stiffness(mk, dk);
        auto oracle = dense_stiffness_oracle(mk, dk);
        for (int i = 0; i < dk.n_free; ++i)
            for (int j = 0; j < dk.n_free; ++j)
                asm_diff = std::max(asm_diff, std::abs(Ak.coeff(i, j) - oracle[i][j]));
    }
    detail = fmt("cg vs dense %.3g (bound 1e-9, N=%d); stiffness vs oracle %.3g (bound 1e-13)",
                 solver_diff, dm.n_free, asm_diff);
    return solver_diff <= 1e-9 && asm_diff <= 1e-13;
}

bool crit9_alpha_search(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    auto quad = [](double x) { return (x - 0.8) * (x - 0.8); };
    AlphaSearchResult qres = golden_section(quad, 0.0, 1.0, 1e-5);
    bool quad_ok = std::abs(qres.alpha_opt - 0.8) <= 1e-4;

    // desk-scale search: level-5 mesh, target 10% above the discrete optimum
    ManufacturedProblem prob = experiment1();
    Mesh m = refined_l_shape(5);
    DofMap dm = build_dofmap(m);
    CsrMatrix A = assemble_stiffness(m, dm);
    auto load = assemble_load(m, dm, prob.f, midpoint_rule());
    auto b_of = [&](const std::vector<double>& U) {
        return assemble_semilinear(m, dm, prob.nonlinearity.g, U, midpoint_rule());
    };
    PicardConfig cfg;
    cfg.alpha = 0.8;
    IterationResult ref =
        picard_solve(A, load, b_of, std::vector<double>(dm.n_free, 0.0), cfg, 25);
    double err_disc = h1_error(m, dm, ref.U, prob.exact_grad_u, order5_rule());

    auto obj = alpha_objective(prob, m, 1.1 * err_disc, 2);
    AlphaSearchResult res = golden_section(obj, 0.0, 1.0, 1e-3);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("quad opt %.6f; desk alpha_opt %.4f (band [0.74,1.0]), objective %.1f "
                 "(<= 5), N=%d, %.0fs",
                 qres.alpha_opt, res.alpha_opt, res.objective_at_opt, dm.n_free, secs);
    return quad_ok && in_band(res.alpha_opt, 0.74, 1.0) && res.objective_at_opt <= 5.0;
}

// Diverged means the sweep sentinel fires: the iteration blows up, or a
// level past the first exhausts its budget without reaching the rate
// criterion. Slow-but-convergent damping stays below the caps because
// gamma = 10 budgets are generous. The rate threshold is -0.45 here, not
// the default -0.49: measured floor slopes on these meshes wobble in
// [-0.53, -0.47], so -0.49 cuts inside the converging band, while a
// non-contracting alpha stalls near slope 0 and caps at any threshold.
bool crit10_divergence(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    ManufacturedProblem prob = experiment3();
    RunConfig cfg = default_config(ExperimentId::Exp3);  // h-list capped near N = 1e5
    cfg.gamma = 10;
    cfg.slope_threshold = -0.45;
    std::vector<Mesh> seq = build_mesh_sequence(prob, cfg);
    bool any_high_diverged = false, all_low_converged = true;
    std::string diverged_list;
    for (int k = 0;; ++k) {
        double a = 0.6 + k / 30.0;
        if (a > 0.99 + 1e-9) break;
        PicardConfig pc;
        pc.alpha = a;
        pc.gamma = cfg.gamma;
        bool diverged = false;
        try {
            auto records = multilevel_run(prob, seq, pc, cfg.gamma, cfg.slope_threshold);
            for (std::size_t i = 1; i < records.size(); ++i)
                diverged = diverged || records[i].stop_reason == StopReason::Budget;
        } catch (const DivergenceError&) {
            diverged = true;
        } catch (const std::overflow_error&) {
            diverged = true;
        }
        if (diverged) diverged_list += fmt("%.4g ", a);
        if (a >= 0.93 && diverged) any_high_diverged = true;
        if (a <= 0.79 && diverged) all_low_converged = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("diverged at alpha { %s}; need one >= 0.93, none <= 0.79, %.0fs",
                 diverged_list.c_str(), secs);
    return any_high_diverged && all_low_converged;
}

bool crit11_initial_mesh(std::string& detail) {
    Mesh m = l_shape_initial_mesh(false);
    validate_mesh(m);
    std::set<std::pair<int, int>> edges;
    for (const auto& tri : m.triangles)
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    int euler = m.n_vertices() - static_cast<int>(edges.size()) + (m.n_triangles() + 1);
    int interior = build_dofmap(m).n_free;
    double area = total_area(m);
    detail = fmt("%d triangles, %d vertices, %d interior, V-E+F = %d, area %.17g",
                 m.n_triangles(), m.n_vertices(), interior, euler, area);
    return m.n_triangles() == 12 && m.n_vertices() == 11 && interior == 3 && euler == 2 &&
           std::abs(area - 3.0) <= 1e-13;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    std::vector<Criterion> crits = {
        {1, "experiment 1 convergence rate", crit1_exp1_rate},
        {2, "experiment 2 graded vs uniform", crit2_exp2_graded_vs_uniform},
        {3, "experiment 3 convergence rate", crit3_exp3_rate},
        {4, "corner exponent bounds", crit4_beta_bounds},
        {5, "patch test", crit5_patch_test},
        {6, "contraction suite", crit6_contraction},
        {7, "quadrature exactness", crit7_quadrature},
        {8, "solver and assembly oracles", crit8_oracles},
        {9, "alpha optimization sanity", crit9_alpha_search},
        {10, "divergence behavior", crit10_divergence},
        {11, "initial mesh", crit11_initial_mesh},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failures = 0;
    for (auto& c : crits) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = fmt("exception: %s", e.what());
        }
        std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
