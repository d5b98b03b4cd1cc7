#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semfem/cg.hpp"
#include "semfem/csr.hpp"

namespace semfem {

struct PicardConfig {
    double alpha = 0.8;        // damping in (0,1]
    int gamma = 4;             // budget multiplier
    double increment_tol = 0.0;  // early exit on ||grad(U_{n+1}-U_n)||; 0 disables
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 100000;
};

inline void validate(const PicardConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw std::invalid_argument("PicardConfig: alpha must lie in (0,1]");
    if (cfg.gamma < 1) throw std::invalid_argument("PicardConfig: gamma must be >= 1");
    if (!(cfg.cg_rel_tol > 0.0) || cfg.cg_max_iter < 1)
        throw std::invalid_argument("PicardConfig: linear-solver tolerances must be positive");
    if (cfg.increment_tol < 0.0)
        throw std::invalid_argument("PicardConfig: increment_tol must be >= 0");
}

enum class StopReason { Budget, IncrementTol, SlopeReached };

struct IterationResult {
    std::vector<double> U;
    int n_iters = 0;
    std::vector<double> increment_history;     // ||grad(U_{n+1}-U_n)|| per step
    std::vector<double> measured_contraction;  // successive increment ratios
    StopReason stop_reason = StopReason::Budget;
};

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration budget gamma * ceil(log(N)) in the given log base (natural by
// default), clamped below at 1. The tiny slack keeps exact integer logs from
// being bumped up by rounding of the quotient.
inline int iteration_budget(int n_dofs, int gamma, double log_base = std::exp(1.0)) {
    if (gamma < 1) throw std::invalid_argument("iteration_budget: gamma must be >= 1");
    if (n_dofs < 1) throw std::invalid_argument("iteration_budget: need at least one dof");
    double l = std::log(static_cast<double>(n_dofs)) / std::log(log_base);
    int budget = gamma * static_cast<int>(std::ceil(l - 1e-12));
    return budget < 1 ? 1 : budget;
}

// One damped Picard step: solves a(U_{n+1}, v) = (1-alpha) a(U_n, v)
// + alpha (l(v) - b(U_n; v)) with the same stiffness matrix A every step,
// warm-starting CG at U_n. alpha = 0 is allowed here and freezes the iterate.
template <class BOf>
inline std::vector<double> picard_step(const CsrMatrix& A, const std::vector<double>& U_n,
                                       const std::vector<double>& load, BOf&& b_of, double alpha,
                                       const PicardConfig& cfg) {
    if (static_cast<int>(U_n.size()) != A.n || U_n.size() != load.size())
        throw std::invalid_argument("picard_step: size mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("picard_step: alpha must lie in [0,1]");
    std::vector<double> b = b_of(U_n);
    if (b.size() != U_n.size())
        throw std::invalid_argument("picard_step: reaction vector size mismatch");
    std::vector<double> rhs = A.multiply(U_n);
    for (int i = 0; i < A.n; ++i)
        rhs[i] = (1.0 - alpha) * rhs[i] + alpha * (load[i] - b[i]);
    return cg_solve(A, rhs, cfg.cg_rel_tol, cfg.cg_max_iter, &U_n);
}

// Runs picard_step up to the budget. The observer is called after every step
// with (step index, iterate, increment norm) and may stop the run by
// returning false (reported as StopReason::SlopeReached). Divergence - an
// increment beyond 1e6 times the first increment's scale, or a non-finite
// one - raises DivergenceError.
template <class BOf, class Observer>
inline IterationResult picard_solve(const CsrMatrix& A, const std::vector<double>& load,
                                    BOf&& b_of, std::vector<double> U0, const PicardConfig& cfg,
                                    int budget, Observer&& observer) {
    validate(cfg);
    if (budget < 1) throw std::invalid_argument("picard_solve: budget must be >= 1");
    if (static_cast<int>(U0.size()) != A.n)
        throw std::invalid_argument("picard_solve: initial iterate size mismatch");

    IterationResult res;
    res.U = std::move(U0);
    std::vector<double> d(A.n), Ad;
    for (int n = 0; n < budget; ++n) {
        std::vector<double> next = picard_step(A, res.U, load, b_of, cfg.alpha, cfg);
        for (int i = 0; i < A.n; ++i) d[i] = next[i] - res.U[i];
        A.multiply(d, Ad);
        double inc = std::sqrt(std::max(0.0, vec_dot(d, Ad)));
        if (!std::isfinite(inc)) throw DivergenceError("picard_solve: non-finite increment");
        res.U = std::move(next);
        res.n_iters = n + 1;
        if (!res.increment_history.empty())
            res.measured_contraction.push_back(inc / res.increment_history.back());
        res.increment_history.push_back(inc);
        if (inc > 1e6 * std::max(1.0, res.increment_history.front()))
            throw DivergenceError(
                "picard_solve: iteration diverged, increment " + std::to_string(inc) +
                " exceeds 1e6 times the initial scale");
        if (!observer(n + 1, res.U, inc)) {
            res.stop_reason = StopReason::SlopeReached;
            return res;
        }
        if (cfg.increment_tol > 0.0 && inc <= cfg.increment_tol) {
            res.stop_reason = StopReason::IncrementTol;
            return res;
        }
    }
    res.stop_reason = StopReason::Budget;
    return res;
}

template <class BOf>
inline IterationResult picard_solve(const CsrMatrix& A, const std::vector<double>& load,
                                    BOf&& b_of, std::vector<double> U0, const PicardConfig& cfg,
                                    int budget) {
    return picard_solve(A, load, b_of, std::move(U0), cfg, budget,
                        [](int, const std::vector<double>&, double) { return true; });
}

}  // namespace semfem
