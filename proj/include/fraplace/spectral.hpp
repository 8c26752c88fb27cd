#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraplace/extended_real.hpp"
#include "fraplace/grid.hpp"
#include "fraplace/nonlocal.hpp"

namespace frap {

struct DescentOptions {
    double tol = 1e-9;     // sup-norm of the strong-form Euler-Lagrange residual
    int max_iter = 30000;
    int restarts = 3;      // random positive starts on top of the constant one
    int workers = 1;
    std::uint64_t seed = 0;
};

struct EigenResult {
    ExtendedReal lambda;
    Field v;            // L^p-normalized, nonnegative (empty for sentinel lambdas)
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Discrete Rayleigh quotient
//   R(v) = [E(v) - sum_{v_i != 0} a_i |v_i|^p h] / sum_i |v_i|^p h.
// Weights must be finite wherever v is nonzero.
double rayleigh_quotient(const Kernel& kernel, const Grid& grid,
                         std::span<const ExtendedReal> a, const Field& v);

// Principal eigenvalue of the weighted problem by projected normalized
// descent. Weight sentinels: a = +inf anywhere gives lambda = -inf; nodes
// with a = -inf are excluded from the admissible support, and if that
// leaves nothing the result is lambda = +inf.
EigenResult principal_eigenpair(const Kernel& kernel, const Grid& grid,
                                std::span<const ExtendedReal> a,
                                const DescentOptions& opts);

// Independent check for p = 2: the energy is a quadratic form, so the
// smallest eigenvalue comes from a dense symmetric eigensolver.
EigenResult dense_oracle_p2(const Kernel& kernel, const Grid& grid,
                            std::span<const double> a);

struct MonotonicityReport {
    ExtendedReal lambda_a, lambda_b;
    double slack = 0.0;  // lambda_a - lambda_b when both finite
    bool ok = false;
};

// Checks lambda_1(a) >= lambda_1(b) - tol for pointwise a <= b.
MonotonicityReport lambda_monotonicity_check(const Kernel& kernel, const Grid& grid,
                                             std::span<const ExtendedReal> a,
                                             std::span<const ExtendedReal> b,
                                             const DescentOptions& opts, double tol);

} // namespace frap
