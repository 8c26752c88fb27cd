#include "fraplace/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "fraplace/reduce.hpp"
#include "fraplace/rng.hpp"

namespace frap {

namespace {

constexpr std::size_t kMaxSamples = 10;

std::string format_sample(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return std::string(buf);
}

struct TrialOutcome {
    double margin = kInf;
    bool violated = false;
    std::string sample;
};

void fold_outcomes(PropertyReport& rep, const std::vector<TrialOutcome>& outcomes) {
    for (const auto& o : outcomes) {
        rep.worst_margin = std::min(rep.worst_margin, o.margin);
        if (o.violated) {
            ++rep.violations;
            if (rep.failure_samples.size() < kMaxSamples) rep.failure_samples.push_back(o.sample);
        }
    }
}

} // namespace

void merge_report(PropertyReport& into, const PropertyReport& from) {
    into.trials += from.trials;
    into.violations += from.violations;
    into.worst_margin = std::min(into.worst_margin, from.worst_margin);
    for (const auto& s : from.failure_samples) {
        if (into.failure_samples.size() >= kMaxSamples) break;
        into.failure_samples.push_back(s);
    }
    if (into.note.empty()) into.note = from.note;
}

PropertyReport check_picone(std::span<const double> p_values, long trials,
                            std::uint64_t seed, int workers) {
    if (trials < 1) throw std::invalid_argument("check_picone: trials must be >= 1");
    PropertyReport rep;
    rep.property = "picone";
    const double tol = 1e-12;
    CounterRng rng(seed);

    // deterministic adversarial corners: near-equal bases, zero numerators,
    // tiny denominators
    const double corners[][4] = {
        {1.0, 1.0, 1.0, 1.0},       {1e-6, 1e-6, 10.0, 10.0}, {2.0, 1e-6, 5.0, 0.0},
        {1e-6, 2.0, 0.0, 5.0},      {1.0, 1.0 + 1e-12, 3.0, 3.0},
        {5.0, 5.0, 0.0, 0.0},       {1e-3, 10.0, 0.5, 0.5},   {10.0, 1e-3, 0.5, 0.5},
        {1e-6, 10.0, 10.0, 0.0},    {1.0 + 1e-12, 1.0, 7.0, 7.0},
    };

    for (double p : p_values) {
        for (const auto& c : corners) {
            const double gap = picone_gap(p, c[0], c[1], c[2], c[3]);
            rep.worst_margin = std::min(rep.worst_margin, gap);
            ++rep.trials;
            if (gap < -tol) {
                ++rep.violations;
                if (rep.failure_samples.size() < kMaxSamples)
                    rep.failure_samples.push_back(format_sample(
                        "p=%.17g a=%.17g b=%.17g c=%.17g d=%.17g gap=%.3e", p, c[0], c[1],
                        c[2], c[3], gap));
            }
        }
        std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
        parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
            const std::uint64_t stream = static_cast<std::uint64_t>(p * 4096.0);
            const double a = 10.0 * (1.0 - rng.uniform01(stream, 4 * t + 0));
            const double b = 10.0 * (1.0 - rng.uniform01(stream, 4 * t + 1));
            const double c = 10.0 * rng.uniform01(stream, 4 * t + 2);
            const double d = 10.0 * rng.uniform01(stream, 4 * t + 3);
            const double gap = picone_gap(p, a, b, c, d);
            outcomes[t].margin = gap;
            if (gap < -tol) {
                outcomes[t].violated = true;
                outcomes[t].sample = format_sample(
                    "p=%.17g a=%.17g b=%.17g c=%.17g d=%.17g gap=%.3e", p, a, b, c, d, gap);
            }
        });
        rep.trials += trials;
        fold_outcomes(rep, outcomes);
    }
    return rep;
}

PropertyReport check_submodularity(const Kernel& kernel, long trials, std::uint64_t seed,
                                   int workers) {
    PropertyReport rep;
    rep.property = "submodularity";
    const double tol = 1e-10;
    const double p = kernel.p;
    const int n = kernel.n;
    CounterRng rng(seed);

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
        Field u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = rng.uniform(2 * t, static_cast<std::uint64_t>(i), -1.0, 1.0);
            v[i] = rng.uniform(2 * t + 1, static_cast<std::uint64_t>(i), -1.0, 1.0);
        }
        // one sweep yields the per-pair slacks and the aggregated energy slack
        double pair_worst = kInf;
        std::vector<double> agg_terms;
        agg_terms.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double du = pow_abs(u[i] - u[j], p);
                const double dv = pow_abs(v[i] - v[j], p);
                const double dmax = pow_abs(std::max(u[i], v[i]) - std::max(u[j], v[j]), p);
                const double dmin = pow_abs(std::min(u[i], v[i]) - std::min(u[j], v[j]), p);
                const double slack = du + dv - dmax - dmin;
                pair_worst = std::min(pair_worst, slack);
                agg_terms.push_back(2.0 * kernel.w(i, j) * slack);
            }
            const double ti = pow_abs(u[i], p) + pow_abs(v[i], p) -
                              pow_abs(std::max(u[i], v[i]), p) -
                              pow_abs(std::min(u[i], v[i]), p);
            agg_terms.push_back(kernel.tail[i] * ti);
        }
        const double aggregate = pairwise_sum(agg_terms);
        outcomes[t].margin = std::min(pair_worst, aggregate);
        if (outcomes[t].margin < -tol) {
            outcomes[t].violated = true;
            outcomes[t].sample = format_sample("trial=%zu pair_worst=%.3e aggregate=%.3e", t,
                                               pair_worst, aggregate);
        }
    });
    rep.trials = trials;
    fold_outcomes(rep, outcomes);
    return rep;
}

PropertyReport check_comparison(const Kernel& kernel, const Field& u, const Field& v) {
    if (static_cast<int>(u.size()) != kernel.n || static_cast<int>(v.size()) != kernel.n)
        throw std::invalid_argument("check_comparison: field length mismatch");
    for (int i = 0; i < kernel.n; ++i)
        if (!(u[i] > 0.0) || !(v[i] > 0.0))
            throw std::invalid_argument("check_comparison: fields must be strictly positive");

    PropertyReport rep;
    rep.property = "comparison";
    const double tol = 1e-10;
    const double p = kernel.p;
    const int n = kernel.n;

    std::vector<double> w(n), ju(n), jv(n);
    for (int i = 0; i < n; ++i) {
        w[i] = std::max(pow_abs(u[i], p) - pow_abs(v[i], p), 0.0);
        ju[i] = w[i] / pow_abs(u[i], p - 1.0);
        jv[i] = w[i] / pow_abs(v[i], p - 1.0);
    }
    auto record = [&](double slack, int i, int j) {
        rep.worst_margin = std::min(rep.worst_margin, slack);
        ++rep.trials;
        if (slack < -tol) {
            ++rep.violations;
            if (rep.failure_samples.size() < kMaxSamples)
                rep.failure_samples.push_back(
                    format_sample("pair (%d,%d): slack=%.3e", i, j, slack));
        }
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double lhs = jp(p, u[i] - u[j]) * (ju[i] - ju[j]);
            const double rhs = jp(p, v[i] - v[j]) * (jv[i] - jv[j]);
            record(lhs - rhs, i, j);
        }
        // exterior pair: the partner sits in the complement, all values 0
        const double lhs = jp(p, u[i]) * ju[i];
        const double rhs = jp(p, v[i]) * jv[i];
        record(lhs - rhs, i, -1);
    }
    return rep;
}

PropertyReport check_comparison_random(const Kernel& kernel, long trials, std::uint64_t seed,
                                       int workers) {
    PropertyReport rep;
    rep.property = "comparison";
    CounterRng rng(seed);
    const int n = kernel.n;

    std::vector<PropertyReport> partial(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
        Field u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = rng.uniform(2 * t, static_cast<std::uint64_t>(i), 0.1, 1.1);
            v[i] = rng.uniform(2 * t + 1, static_cast<std::uint64_t>(i), 0.1, 1.1);
        }
        partial[t] = check_comparison(kernel, u, v);
    });
    for (const auto& r : partial) merge_report(rep, r);
    return rep;
}

PropertyReport check_quotient_bound(const Grid& grid, const Field& u, const Field& v,
                                    double s, double p) {
    PropertyReport rep;
    rep.property = "quotient_bound";
    const double tol = 1e-10;
    const int n = grid.n;
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
        throw std::invalid_argument("check_quotient_bound: field length mismatch");

    // hypothesis: both fields comparable to d^s
    const std::vector<double> ds = boundary_power(grid, s);
    double band = 0.0;
    bool hypothesis_ok = true;
    for (int i = 0; i < n; ++i) {
        if (!(u[i] > 0.0) || !(v[i] > 0.0)) {
            hypothesis_ok = false;
            break;
        }
        band = std::max({band, u[i] / ds[i], ds[i] / u[i], v[i] / ds[i], ds[i] / v[i]});
    }
    if (!hypothesis_ok) {
        rep.note = "hypothesis failure: fields not strictly positive";
        return rep;
    }
    rep.note = format_sample("band constant C=%.6g", band);

    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, u[i] / v[i]);
    const double c1 = p * std::pow(m, p - 1.0);
    const double c2 = (p - 1.0) * std::pow(m, p);

    std::vector<double> quot(n);
    for (int i = 0; i < n; ++i) quot[i] = pow_abs(u[i], p) / pow_abs(v[i], p - 1.0);

    auto record = [&](double slack, int i, int j) {
        rep.worst_margin = std::min(rep.worst_margin, slack);
        ++rep.trials;
        if (slack < -tol) {
            ++rep.violations;
            if (rep.failure_samples.size() < kMaxSamples)
                rep.failure_samples.push_back(
                    format_sample("pair (%d,%d): slack=%.3e", i, j, slack));
        }
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j)
            record(c1 * std::fabs(u[i] - u[j]) + c2 * std::fabs(v[i] - v[j]) -
                       std::fabs(quot[i] - quot[j]),
                   i, j);
        record(c1 * u[i] + c2 * v[i] - quot[i], i, -1);
    }
    return rep;
}

PropertyReport check_quotient_bound_random(const Grid& grid, double s, double p, long trials,
                                           std::uint64_t seed) {
    PropertyReport rep;
    rep.property = "quotient_bound";
    CounterRng rng(seed);
    const std::vector<double> ds = boundary_power(grid, s);
    for (long t = 0; t < trials; ++t) {
        Field u(grid.n), v(grid.n);
        for (int i = 0; i < grid.n; ++i) {
            u[i] = ds[i] * rng.uniform(2 * static_cast<std::uint64_t>(t),
                                       static_cast<std::uint64_t>(i), 0.5, 1.5);
            v[i] = ds[i] * rng.uniform(2 * static_cast<std::uint64_t>(t) + 1,
                                       static_cast<std::uint64_t>(i), 0.5, 1.5);
        }
        merge_report(rep, check_quotient_bound(grid, u, v, s, p));
    }
    return rep;
}

PropertyReport check_harness_selftest() {
    // evaluates a deliberately false inequality so a healthy harness reports
    // violations; used as the negative test of the reporting pipeline
    PropertyReport rep;
    rep.property = "selftest_tampered";
    rep.note = "deliberately broken inequality; violations are expected";
    for (int t = 0; t < 16; ++t) {
        const double a = 1.0 + t, b = 2.0 + t, c = 1.5, d = 0.5;
        const double tampered = -picone_gap(2.0, a, b, c, d) - 1.0;
        rep.worst_margin = std::min(rep.worst_margin, tampered);
        ++rep.trials;
        if (tampered < -1e-12) {
            ++rep.violations;
            if (rep.failure_samples.size() < kMaxSamples)
                rep.failure_samples.push_back(format_sample("t=%d margin=%.3e", t, tampered));
        }
    }
    return rep;
}

CriterionVerdict evaluate_criterion(const Kernel& kernel, const Grid& grid,
                                    const Reaction& reaction, const DescentOptions& opts) {
    CriterionVerdict verdict;

    // hypothesis screen on a log-spaced sample set
    std::vector<double> samples;
    for (int i = 0; i <= 48; ++i) samples.push_back(std::pow(10.0, -4.0 + 6.0 * i / 48.0));
    const HypothesesReport hyp = validate_hypotheses(reaction, grid, samples);
    verdict.hypotheses_ok = hyp.pass();

    const auto a0 = asymptotes_zero(reaction, grid);
    const auto ainf = asymptotes_infty(reaction, grid);

    auto count_inf = [](std::span<const ExtendedReal> a, bool plus) {
        int c = 0;
        for (const auto& x : a)
            if ((plus && x.is_plus_inf()) || (!plus && x.is_minus_inf())) ++c;
        return c;
    };
    const int a0_plus = count_inf(a0, true), a0_minus = count_inf(a0, false);
    const int ainf_minus = count_inf(ainf, false);
    const int n = kernel.n;

    verdict.lambda_a0 = principal_eigenpair(kernel, grid, a0, opts).lambda;
    verdict.lambda_ainf = principal_eigenpair(kernel, grid, ainf, opts).lambda;
    verdict.solvable = verdict.lambda_a0 < ExtendedReal::finite(0.0) &&
                       ExtendedReal::finite(0.0) < verdict.lambda_ainf;

    std::string reason;
    if (!verdict.hypotheses_ok) reason += "warning: structural hypotheses fail numerically; ";
    if (a0_plus > 0) reason += "a0 = +inf on " + std::to_string(a0_plus) +
                               " node(s) -> lambda1(a0) = -inf; ";
    if (a0_minus == n) reason += "a0 = -inf everywhere -> lambda1(a0) = +inf (empty support); ";
    else if (a0_minus > 0) {
        reason += "a0 = -inf on a strict subset (support-restricted eigensolve); ";
        verdict.experimental = true;
    }
    if (ainf_minus == n) reason += "a_inf = -inf everywhere -> lambda1(a_inf) = +inf; ";
    else if (ainf_minus > 0) {
        reason += "a_inf = -inf on a strict subset (support-restricted eigensolve); ";
        verdict.experimental = true;
    }
    if (a0_plus > 0 && (a0_minus > 0 || ainf_minus > 0)) verdict.experimental = true;
    reason += verdict.solvable ? "criterion satisfied: lambda1(a0) < 0 < lambda1(a_inf)"
                               : "criterion fails: need lambda1(a0) < 0 < lambda1(a_inf)";
    verdict.reason = reason;
    return verdict;
}

PropertyReport check_necessity(const Kernel& kernel, const Grid& grid,
                               const Reaction& reaction, const SolveResult& solve_result,
                               const DescentOptions& opts) {
    PropertyReport rep;
    rep.property = "necessity";
    rep.trials = 1;
    if (solve_result.classification != "positive_solution") {
        rep.note = "vacuous: no positive solution classified";
        rep.worst_margin = 0.0;
        return rep;
    }
    const CriterionVerdict verdict = evaluate_criterion(kernel, grid, reaction, opts);
    rep.worst_margin = verdict.solvable ? 0.0 : -1.0;
    if (!verdict.solvable) {
        rep.violations = 1;
        rep.failure_samples.push_back("positive solution found but criterion verdict is not solvable");
    }
    return rep;
}

} // namespace frap
