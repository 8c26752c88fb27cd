#include "fraplace/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "fraplace/reduce.hpp"
#include "fraplace/rng.hpp"

namespace frap {

namespace {

double sup_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double sup_abs(const Field& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

// sup-norm of the strong-form defect g_i/h - f(x_i, u_i)
double weak_residual(const Kernel& kernel, const Grid& grid, const Reaction& reaction,
                     const Field& u, const Field& g) {
    double worst = 0.0;
    for (int i = 0; i < kernel.n; ++i) {
        const double r = g[i] / kernel.measure - eval_f(reaction, grid.nodes[i], u[i]);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

Field positive_part(const Field& u) {
    Field v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = std::max(u[i], 0.0);
    return v;
}

struct TruncatedDescent {
    Field u;
    double phi_k = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    double min_u_precleanup = 0.0;
    long invariant_violations = 0;
};

TruncatedDescent descend_phi(const Kernel& kernel, const Grid& grid, const Reaction& trunc,
                             Field u, const SolverOptions& opts) {
    TruncatedDescent out;
    double value = phi(kernel, grid, trunc, u);
    double step = 1.0;
    int iter = 0;
    bool converged = false;

    for (; iter < opts.max_iter; ++iter) {
        const Field g = apply_operator(kernel, u, opts.workers);
        double residual = 0.0;
        Field grad(u.size());
        double gnorm2 = 0.0;
        for (int i = 0; i < kernel.n; ++i) {
            grad[i] = g[i] - eval_f(trunc, grid.nodes[i], u[i]) * kernel.measure;
            residual = std::max(residual, std::fabs(grad[i]) / kernel.measure);
            gnorm2 += grad[i] * grad[i];
        }
        out.residual = residual;
        if (residual < opts.tol) {
            converged = true;
            break;
        }
        if (value < -1e50 || sup_abs(u) > 1e25) {
            out.diverged = true;
            break;
        }
        if (opts.check_invariants && iter % 25 == 0) {
            const double phi_pos = phi(kernel, grid, trunc, positive_part(u));
            if (phi_pos > value + 1e-10 * (1.0 + std::fabs(value))) ++out.invariant_violations;
        }

        double trial = std::min(1.0, step * 2.0);
        Field cand(u.size());
        bool accepted = false;
        while (trial > 1e-20) {
            for (std::size_t i = 0; i < u.size(); ++i) cand[i] = u[i] - trial * grad[i];
            const double cand_value = phi(kernel, grid, trunc, cand);
            if (cand_value <= value - 1e-4 * trial * gnorm2) {
                u = std::move(cand);
                value = cand_value;
                step = trial;
                accepted = true;
                break;
            }
            trial *= 0.5;
        }
        if (!accepted) {
            converged = true;  // stalled at float resolution
            break;
        }
    }

    out.min_u_precleanup = u.empty() ? 0.0 : *std::min_element(u.begin(), u.end());
    // positive-part replacement; never increases Phi_k
    Field up = positive_part(u);
    const double phi_up = phi(kernel, grid, trunc, up);
    if (phi_up <= value) {
        u = std::move(up);
        value = phi_up;
    }
    out.u = std::move(u);
    out.phi_k = value;
    out.iterations = iter;
    out.converged = converged;
    return out;
}

Field initial_field(const Grid& grid, double s, const SolverOptions& opts, int start) {
    CounterRng rng(opts.seed);
    Field u0(grid.n);
    if (opts.random_start) {
        for (int i = 0; i < grid.n; ++i)
            u0[i] = 0.01 + rng.uniform01(0x5147u + static_cast<std::uint64_t>(start), i);
        return u0;
    }
    const std::vector<double> ds = boundary_power(grid, s);
    for (int i = 0; i < grid.n; ++i) {
        double noise = 0.0;
        if (start > 0) noise = 0.01 * rng.uniform01(static_cast<std::uint64_t>(start), i);
        u0[i] = 0.1 * ds[i] + noise;
    }
    return u0;
}

bool clamp_inactive(const Grid& grid, const Reaction& reaction, int k, const Field& u) {
    for (int i = 0; i < grid.n; ++i) {
        const double f = eval_f(reaction, grid.nodes[i], u[i]);
        const double bound = -static_cast<double>(k) *
                             std::pow(std::max(u[i], 0.0), reaction.p - 1.0);
        if (f < bound) return false;
    }
    return true;
}

} // namespace

double phi(const Kernel& kernel, const Grid& grid, const Reaction& reaction, const Field& u) {
    if (static_cast<int>(u.size()) != kernel.n)
        throw std::invalid_argument("phi: field length does not match kernel");
    const double energy = gagliardo_energy(kernel, u);
    std::vector<double> terms(u.size());
    for (int i = 0; i < kernel.n; ++i)
        terms[i] = eval_F(reaction, grid.nodes[i], u[i]) * kernel.measure;
    return energy / kernel.p - pairwise_sum(terms);
}

Field phi_gradient(const Kernel& kernel, const Grid& grid, const Reaction& truncated_reaction,
                   const Field& u) {
    if (!truncated_reaction.truncated())
        throw std::invalid_argument("phi_gradient: reaction must be truncated");
    Field g = apply_operator(kernel, u);
    for (int i = 0; i < kernel.n; ++i)
        g[i] -= eval_f(truncated_reaction, grid.nodes[i], u[i]) * kernel.measure;
    return g;
}

SolveResult minimize_truncated(const Kernel& kernel, const Grid& grid,
                               const Reaction& reaction, int k, const SolverOptions& opts) {
    const Reaction trunc = reaction.truncated() ? reaction : truncate(reaction, k);
    if (*trunc.k != k)
        throw std::invalid_argument("minimize_truncated: reaction truncated at a different level");

    std::optional<TruncatedDescent> best;
    int total_iters = 0;
    long violations = 0;
    const int starts = std::max(1, opts.starts);
    for (int start = 0; start < starts; ++start) {
        TruncatedDescent run =
            descend_phi(kernel, grid, trunc, initial_field(grid, kernel.s, opts, start), opts);
        total_iters += run.iterations;
        violations += run.invariant_violations;
        if (run.diverged) {
            SolveResult res;
            res.k_final = k;
            res.iterations = total_iters;
            res.converged = false;
            res.classification = "non_coercive";
            res.invariant_violations = violations;
            return res;
        }
        if (!best || run.phi_k < best->phi_k) best = std::move(run);
    }

    SolveResult res;
    res.u = best->u;
    res.phi = best->phi_k;
    res.residual = best->residual;
    res.k_final = k;
    res.iterations = total_iters;
    res.min_u = res.u.empty() ? 0.0 : *std::min_element(res.u.begin(), res.u.end());
    res.min_u_precleanup = best->min_u_precleanup;
    res.converged = best->converged;
    res.invariant_violations = violations;
    const auto band = boundary_behavior(grid, positive_part(res.u), kernel.s,
                                        opts.boundary_fraction);
    res.boundary_ratio_lo = band.first;
    res.boundary_ratio_hi = band.second;
    return res;
}

std::pair<ExtendedReal, ExtendedReal> criterion_lambdas(const Kernel& kernel, const Grid& grid,
                                                        const Reaction& reaction,
                                                        const DescentOptions& opts) {
    const auto a0 = asymptotes_zero(reaction, grid);
    const auto ainf = asymptotes_infty(reaction, grid);
    const ExtendedReal la0 = principal_eigenpair(kernel, grid, a0, opts).lambda;
    const ExtendedReal lainf = principal_eigenpair(kernel, grid, ainf, opts).lambda;
    return {la0, lainf};
}

SolveResult minimize_escalating(const Kernel& kernel, const Grid& grid,
                                const Reaction& reaction, const SolverOptions& opts) {
    std::optional<SolveResult> prev;
    int total_iters = 0;
    long violations = 0;
    bool last_non_coercive = false;
    for (int k = 1; k <= opts.k_max; k *= 2) {
        SolveResult cur = minimize_truncated(kernel, grid, reaction, k, opts);
        total_iters += cur.iterations;
        violations += cur.invariant_violations;
        if (cur.classification == "non_coercive") {
            prev.reset();
            last_non_coercive = true;
            continue;  // larger k restores coercivity
        }
        last_non_coercive = false;
        const bool stable = prev && sup_diff(cur.u, prev->u) < opts.stabilize_tol;
        if (stable && clamp_inactive(grid, reaction, k, cur.u)) {
            // report against the untruncated reaction
            SolveResult res = std::move(cur);
            res.iterations = total_iters;
            res.invariant_violations = violations;
            res.phi = phi(kernel, grid, reaction, res.u);
            const Field g = apply_operator(kernel, res.u, opts.workers);
            res.residual = weak_residual(kernel, grid, reaction, res.u, g);
            const double sup_u = sup_abs(res.u);
            if (sup_u < opts.zero_threshold)
                res.classification = "no_positive_solution";
            else if (res.min_u > 0.0 && res.residual < opts.tol)
                res.classification = "positive_solution";
            else
                res.classification = "unclassified";
            res.converged = res.converged && res.residual < opts.tol;
            return res;
        }
        prev = std::move(cur);
    }
    SolveResult res = prev ? std::move(*prev) : SolveResult{};
    res.iterations = total_iters;
    res.invariant_violations = violations;
    res.converged = false;
    res.classification = last_non_coercive ? "non_coercive" : "k_escalation_exhausted";
    return res;
}

SolveResult solve(const Kernel& kernel, const Grid& grid, const Reaction& reaction,
                  const SolverOptions& opts) {
    const auto [la0, lainf] = criterion_lambdas(kernel, grid, reaction, opts.eigen);
    const bool solvable =
        la0 < ExtendedReal::finite(0.0) && ExtendedReal::finite(0.0) < lainf;

    if (!solvable) {
        SolveResult res;
        res.u.assign(grid.n, 0.0);
        res.lambda_a0 = la0;
        res.lambda_ainf = lainf;
        res.solvable = false;
        res.converged = true;
        res.classification = "no_positive_solution";
        // weak-equation defect of the zero field
        double worst = 0.0;
        for (int i = 0; i < grid.n; ++i)
            worst = std::max(worst, std::fabs(eval_f(reaction, grid.nodes[i], 0.0)));
        res.residual = worst;
        return res;
    }

    SolveResult res = minimize_escalating(kernel, grid, reaction, opts);
    res.lambda_a0 = la0;
    res.lambda_ainf = lainf;
    res.solvable = true;
    return res;
}

UniquenessReport multi_start_uniqueness(const Kernel& kernel, const Grid& grid,
                                        const Reaction& reaction, int m,
                                        const SolverOptions& opts) {
    UniquenessReport rep;
    rep.starts = m + 1;
    std::vector<Field> solutions;
    for (int j = 0; j <= m; ++j) {
        SolverOptions run_opts = opts;
        run_opts.starts = 1;
        run_opts.seed = opts.seed + static_cast<std::uint64_t>(j);
        run_opts.random_start = j > 0;
        SolveResult res = solve(kernel, grid, reaction, run_opts);
        rep.sup_norms.push_back(sup_abs(res.u));
        if (!res.converged && res.classification != "no_positive_solution") {
            ++rep.failures;
            continue;
        }
        solutions.push_back(std::move(res.u));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < solutions.size(); ++i)
        for (std::size_t j = i + 1; j < solutions.size(); ++j)
            worst = std::max(worst, sup_diff(solutions[i], solutions[j]));
    rep.max_pairwise_dist = worst;
    rep.verdict = (rep.failures == 0 && worst < opts.uniqueness_tol) ? "unique_within_tol"
                                                                     : "divergent";
    return rep;
}

std::pair<double, double> boundary_behavior(const Grid& grid, const Field& u, double s,
                                            double fraction) {
    if (static_cast<int>(u.size()) != grid.n)
        throw std::invalid_argument("boundary_behavior: field length does not match grid");
    if (!(fraction > 0.0 && fraction <= 0.5))
        throw std::invalid_argument("boundary_behavior: fraction must lie in (0, 0.5]");
    for (double v : u)
        if (v < 0.0) throw std::invalid_argument("boundary_behavior: field must be nonnegative");

    std::vector<double> sorted = grid.dist;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(grid.n))) - 1;
    const double threshold = sorted[std::min(idx, sorted.size() - 1)];

    double lo = kInf, hi = -kInf;
    for (int i = 0; i < grid.n; ++i) {
        if (grid.dist[i] > threshold) continue;
        const double ratio = u[i] / std::pow(grid.dist[i], s);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return {lo, hi};
}

} // namespace frap
