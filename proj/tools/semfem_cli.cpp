#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semfem/cli.hpp"

namespace {

double parse_log_base(const std::string& s) {
    if (s == "e") return std::exp(1.0);
    double v = std::stod(s);
    if (!(v > 1.0)) throw CLI::ValidationError("--budget-log-base must be e or a number > 1");
    return v;
}

// Shared experiment/mesh/iteration flags; each subcommand layers its own.
struct CommonFlags {
    std::string experiment = "exp1";
    std::string mesh;
    double beta = -1.0;
    int levels = 0;
    std::vector<double> h_list;
    double alpha = -1.0;
    int gamma = 0;
    double slope_threshold = -0.49;
    double target_err = 2e-2;
    std::string log_base = "e";
    std::string out_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--experiment", experiment, "Experiment: exp1, exp2 or exp3")
            ->check(CLI::IsMember({"exp1", "exp2", "exp3"}));
        cmd->add_option("--mesh", mesh, "Mesh family: uniform or graded")
            ->check(CLI::IsMember({"uniform", "graded"}));
        cmd->add_option("--beta", beta, "Grading exponent at the re-entrant corner");
        cmd->add_option("--levels", levels, "Uniform mode: number of meshes");
        cmd->add_option("--h-list", h_list, "Graded mode: decreasing mesh-size targets")
            ->delimiter(',');
        cmd->add_option("--alpha", alpha, "Damping parameter in (0,1]");
        cmd->add_option("--gamma", gamma, "Iteration budget multiplier");
        cmd->add_option("--slope-threshold", slope_threshold,
                        "Early level stop once the error slope drops below this");
        cmd->add_option("--budget-log-base", log_base, "Log base in the iteration budget (e or 10)");
        cmd->add_option("--out", out_path, "Output CSV path (stdout if omitted)");
    }

    semfem::RunConfig resolve() const {
        std::map<std::string, semfem::ExperimentId> ids = {
            {"exp1", semfem::ExperimentId::Exp1},
            {"exp2", semfem::ExperimentId::Exp2},
            {"exp3", semfem::ExperimentId::Exp3}};
        semfem::RunConfig cfg = semfem::default_config(ids.at(experiment));
        if (mesh == "uniform") cfg.mesh_mode = semfem::MeshMode::Uniform;
        if (mesh == "graded") cfg.mesh_mode = semfem::MeshMode::Graded;
        if (beta >= 0.0) cfg.beta = beta;
        if (levels > 0) cfg.levels = levels;
        if (!h_list.empty()) {
            cfg.h_list = h_list;
            if (mesh.empty()) cfg.mesh_mode = semfem::MeshMode::Graded;
        }
        if (alpha >= 0.0) cfg.alpha = alpha;
        if (gamma > 0) cfg.gamma = gamma;
        cfg.slope_threshold = slope_threshold;
        cfg.target_err = target_err;
        cfg.budget_log_base = parse_log_base(log_base);
        cfg.out_path = out_path;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"P1 finite element solver for semilinear problems on the L-shaped domain"};
    // help stays on --help alone; -h would collide with mesh's --h
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    auto add_cmd = [&app](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "Print this help message and exit");
        return cmd;
    };

    CommonFlags run_flags;
    CLI::App* run = add_cmd("run", "Multilevel convergence study, CSV per level");
    run_flags.attach(run);

    CommonFlags opt_flags;
    CLI::App* opt = add_cmd("optimize-alpha",
                            "Golden-section search for the damping parameter");
    opt_flags.attach(opt);
    opt->add_option("--target-err", opt_flags.target_err, "Error level the iteration must reach");

    CommonFlags sweep_flags;
    double grid_lo = 0.6, grid_hi = 0.99;
    double grid_step = 1.0 / 30.0;
    CLI::App* sweep = add_cmd("sweep-alpha", "Total iterations over a grid of alphas");
    sweep_flags.attach(sweep);
    sweep->add_option("--grid-lo", grid_lo, "First alpha sample");
    sweep->add_option("--grid-hi", grid_hi, "Last alpha sample");
    sweep->add_option("--grid-step", grid_step, "Grid spacing");

    double mesh_beta = 0.4, mesh_h = 0.035;
    std::string mesh_out;
    CLI::App* mesh = add_cmd("mesh", "Write a graded mesh file");
    mesh->add_option("--beta", mesh_beta, "Grading exponent at the re-entrant corner");
    mesh->add_option("--h", mesh_h, "Target mesh size")->required();
    mesh->add_option("--out", mesh_out, "Output mesh path")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return semfem::cmd_run(run_flags.resolve());
    if (opt->parsed()) return semfem::cmd_optimize_alpha(opt_flags.resolve());
    if (sweep->parsed()) return semfem::cmd_sweep_alpha(sweep_flags.resolve(), grid_lo, grid_hi, grid_step);
    if (mesh->parsed()) return semfem::cmd_mesh(mesh_beta, mesh_h, mesh_out);
    return 1;
}
