#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fraplace/grid.hpp"
#include "fraplace/nonlocal.hpp"
#include "fraplace/reaction.hpp"
#include "fraplace/spectral.hpp"

namespace frap {

struct SolverOptions {
    double tol = 1e-9;          // sup-norm of the strong-form weak-equation defect
    int max_iter = 50000;
    int starts = 1;
    int k_max = 1024;
    double stabilize_tol = 1e-7;
    double zero_threshold = 1e-8;   // below this sup-norm the run counts as "no positive solution"
    double boundary_fraction = 0.1;
    double uniqueness_tol = 1e-6;
    bool check_invariants = true;
    int workers = 1;
    std::uint64_t seed = 0;
    bool random_start = false;  // replace the d^s profile start by a random positive field
    DescentOptions eigen;       // options for the criterion eigensolves
};

struct SolveResult {
    Field u;
    double phi = 0.0;            // energy functional at u
    double residual = 0.0;       // sup-norm weak-equation defect
    int k_final = 0;             // truncation level at which the solution stabilized
    int iterations = 0;
    double min_u = 0.0;
    double min_u_precleanup = 0.0;  // before the positive-part replacement
    double boundary_ratio_lo = 0.0, boundary_ratio_hi = 0.0;
    bool converged = false;
    std::string classification;  // positive_solution | no_positive_solution | ...
    long invariant_violations = 0;
    // criterion diagnostics attached by solve()
    ExtendedReal lambda_a0, lambda_ainf;
    bool solvable = false;
};

struct UniquenessReport {
    int starts = 0;
    double max_pairwise_dist = 0.0;
    std::string verdict;  // unique_within_tol | divergent
    int failures = 0;
    std::vector<double> sup_norms;
};

// Phi(u) = E(u)/p - sum_i F(x_i, u_i) h; pass a truncated reaction for Phi_k.
double phi(const Kernel& kernel, const Grid& grid, const Reaction& reaction, const Field& u);

// Gradient of Phi_k; defined only for truncated reactions (the bilateral
// growth restored by the clamp is what makes Phi_k differentiable).
Field phi_gradient(const Kernel& kernel, const Grid& grid, const Reaction& truncated_reaction,
                   const Field& u);

// Unconstrained Armijo descent on Phi_k from opts.starts initial fields;
// the returned field carries the positive-part cleanup.
SolveResult minimize_truncated(const Kernel& kernel, const Grid& grid,
                               const Reaction& reaction, int k, const SolverOptions& opts);

// Principal eigenvalues of the two asymptotic weights of the reaction.
std::pair<ExtendedReal, ExtendedReal> criterion_lambdas(const Kernel& kernel, const Grid& grid,
                                                        const Reaction& reaction,
                                                        const DescentOptions& opts);

// Full pipeline: evaluate the solvability criterion; when it holds, run the
// truncation escalation k = 1, 2, 4, ... until two consecutive levels agree
// and the clamp is inactive, then report against the untruncated reaction.
SolveResult solve(const Kernel& kernel, const Grid& grid, const Reaction& reaction,
                  const SolverOptions& opts);

// Escalation loop without the criterion gate (used by the lambda sweep,
// where the empirical onset must come from minimization alone).
SolveResult minimize_escalating(const Kernel& kernel, const Grid& grid,
                                const Reaction& reaction, const SolverOptions& opts);

UniquenessReport multi_start_uniqueness(const Kernel& kernel, const Grid& grid,
                                        const Reaction& reaction, int m,
                                        const SolverOptions& opts);

// min and max of u_i / d_i^s over the near-boundary band: nodes whose
// distance lies in the lowest `fraction` quantile.
std::pair<double, double> boundary_behavior(const Grid& grid, const Field& u, double s,
                                            double fraction);

} // namespace frap
