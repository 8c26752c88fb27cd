#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fraplace/extended_real.hpp"
#include "fraplace/grid.hpp"
#include "fraplace/nonlocal.hpp"
#include "fraplace/reaction.hpp"
#include "fraplace/solver.hpp"
#include "fraplace/spectral.hpp"

namespace frap {

struct PropertyReport {
    std::string property;
    long trials = 0;
    long violations = 0;          // margins below -tol
    double worst_margin = kInf;   // most negative slack observed
    std::vector<std::string> failure_samples;  // bounded
    std::string note;
};

// counts add, margins min-merge, samples concatenate up to the bound
void merge_report(PropertyReport& into, const PropertyReport& from);

// Discrete Picone inequality on random draws a, b in (0,10], c, d in [0,10]
// plus deterministic adversarial corners; slack must stay >= -1e-12.
PropertyReport check_picone(std::span<const double> p_values, long trials,
                            std::uint64_t seed, int workers = 1);

// Submodularity of the nonlocal energy on random field pairs, checked both
// aggregated and per interaction pair; slack >= -1e-10.
PropertyReport check_submodularity(const Kernel& kernel, long trials, std::uint64_t seed,
                                   int workers = 1);

// Pairwise comparison inequality with w = (u^p - v^p)^+ for one positive
// field pair, including the zero-extension exterior pairs.
PropertyReport check_comparison(const Kernel& kernel, const Field& u, const Field& v);
PropertyReport check_comparison_random(const Kernel& kernel, long trials, std::uint64_t seed,
                                       int workers = 1);

// Lipschitz-type bound for the quotient u^p / v^{p-1} with the explicit
// constants C1 = p M^{p-1}, C2 = (p-1) M^p, M = sup u/v.
PropertyReport check_quotient_bound(const Grid& grid, const Field& u, const Field& v,
                                    double s, double p);
PropertyReport check_quotient_bound_random(const Grid& grid, double s, double p, long trials,
                                           std::uint64_t seed);

// Deliberately broken inequality; proves the harness detects violations.
PropertyReport check_harness_selftest();

struct CriterionVerdict {
    ExtendedReal lambda_a0, lambda_ainf;
    bool solvable = false;
    bool hypotheses_ok = true;
    bool experimental = false;  // mixed-infinity weights
    std::string reason;
};

// Solvability criterion: lambda_1(a_0) < 0 < lambda_1(a_infty).
CriterionVerdict evaluate_criterion(const Kernel& kernel, const Grid& grid,
                                    const Reaction& reaction, const DescentOptions& opts);

// Contrapositive consistency: a positive solution forces a solvable verdict.
PropertyReport check_necessity(const Kernel& kernel, const Grid& grid,
                               const Reaction& reaction, const SolveResult& solve_result,
                               const DescentOptions& opts);

} // namespace frap
