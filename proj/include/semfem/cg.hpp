#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "semfem/csr.hpp"

namespace semfem {

// Jacobi-preconditioned conjugate gradients. Stops only when the true
// residual satisfies ||A x - rhs||_2 <= rel_tol * ||rhs||_2: the recurrence
// residual triggers a check, and the solve restarts from the recomputed
// residual if the recurrence has drifted. Deterministic for fixed inputs.
inline std::vector<double> cg_solve(const CsrMatrix& A, const std::vector<double>& rhs,
                                    double rel_tol, int max_iter,
                                    const std::vector<double>* x0 = nullptr) {
    const int n = A.n;
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("cg_solve: rhs size does not match matrix dimension");
    if (x0 && static_cast<int>(x0->size()) != n)
        throw std::invalid_argument("cg_solve: initial guess size does not match");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("cg_solve: rel_tol must be positive");

    std::vector<double> x = x0 ? *x0 : std::vector<double>(n, 0.0);
    double bnorm = vec_norm2(rhs);
    if (bnorm == 0.0) return std::vector<double>(n, 0.0);
    const double tol_abs = rel_tol * bnorm;

    std::vector<double> invd(n);
    {
        std::vector<double> d = A.diagonal();
        for (int i = 0; i < n; ++i) {
            if (!(d[i] > 0.0))
                throw std::runtime_error("cg_solve: non-positive diagonal entry, matrix not SPD");
            invd[i] = 1.0 / d[i];
        }
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    auto restart = [&] {
        A.multiply(x, r);
        for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
        for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
        p = z;
        return vec_dot(r, z);
    };
    double rz = restart();
    double rnorm = vec_norm2(r);

    for (int it = 0; it < max_iter; ++it) {
        if (rnorm <= tol_abs) {
            // verify with the true residual before accepting
            double true_rz = restart();
            rnorm = vec_norm2(r);
            if (rnorm <= tol_abs) return x;
            rz = true_rz;
        }
        A.multiply(p, q);
        double pq = vec_dot(p, q);
        if (!(pq > 0.0))
            throw std::runtime_error("cg_solve: non-positive curvature encountered (p'Ap = " +
                                     std::to_string(pq) + "), matrix not SPD");
        double step = rz / pq;
        for (int i = 0; i < n; ++i) x[i] += step * p[i];
        for (int i = 0; i < n; ++i) r[i] -= step * q[i];
        for (int i = 0; i < n; ++i) z[i] = invd[i] * r[i];
        double rz_next = vec_dot(r, z);
        double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        rnorm = vec_norm2(r);
    }
    // final true-residual check: the recurrence may just have converged
    restart();
    rnorm = vec_norm2(r);
    if (rnorm <= tol_abs) return x;
    throw std::runtime_error("cg_solve: maximum iterations (" + std::to_string(max_iter) +
                             ") exceeded, residual " + std::to_string(rnorm) + " > tolerance " +
                             std::to_string(tol_abs));
}

}  // namespace semfem
