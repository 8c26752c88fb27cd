#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fraplace/extended_real.hpp"
#include "fraplace/grid.hpp"

namespace frap {

enum class ReactionKind { Logistic, ExponentialPaper, PowerCombo, CustomTabulated };

// Reaction f(x,t). Families are autonomous profiles f0(t) times an optional
// spatial tilt rho(x) = exp(rho_beta * x) > 0. For t <= 0 every reaction
// evaluates as f(x,0). A set truncation level k replaces f by
//   f_k(x,t) = f(x,t+) v (-k (t+)^{p-1}).
struct Reaction {
    ReactionKind kind = ReactionKind::Logistic;
    double p = 2.0;            // ambient exponent
    double lambda = 1.0;       // leading coefficient
    double q = 0.0;            // low exponent
    double r = 0.0;            // high exponent
    double alpha = 0.0;        // exponential rate
    double mu = 0.0;           // second coefficient (power_combo)
    double c = 0.0;            // constant term (power_combo)
    double rho_beta = 0.0;     // spatial tilt rate
    std::optional<int> k;      // truncation level

    std::vector<double> table_t, table_f;            // custom_tabulated
    std::optional<ExtendedReal> decl_a0, decl_ainf;  // declared asymptotes

    // memo for clamp breakpoints, keyed by node coordinate
    struct BreakpointCache {
        std::mutex mutex;
        std::unordered_map<std::uint64_t, double> map;
    };
    std::shared_ptr<BreakpointCache> bp_cache;

    double rho(double x) const;
    bool truncated() const { return k.has_value(); }
};

// sub-/equidiffusive logistic profile lambda (t^{q-1} - t^{r-1}), 1 < q <= p < r
Reaction make_logistic(double p, double lambda, double q, double r);

// lambda (t^{p-1} - t^{r-1}) on [0,1], lambda (t^{p-1} - e^{t^alpha - 1}) beyond,
// with alpha >= p-1, r > p
Reaction make_exponential_paper(double p, double alpha, double r, double lambda = 1.0);

// c + lambda t^{q-1} + mu t^{r-1}; free-form family for engineered
// hypothesis violations and shifted-sign experiments
Reaction make_power_combo(double p, double c, double lambda, double q,
                          double mu = 0.0, double r = 2.0);

// piecewise-linear profile through (t_i, f_i); asymptotes must be declared
Reaction make_custom_tabulated(double p, std::vector<double> t, std::vector<double> f,
                               ExtendedReal a0, ExtendedReal ainf);

double eval_f(const Reaction& reaction, double x, double t);
double eval_F(const Reaction& reaction, double x, double t);

ExtendedReal asymptote_zero(const Reaction& reaction, double x);
ExtendedReal asymptote_infty(const Reaction& reaction, double x);

std::vector<ExtendedReal> asymptotes_zero(const Reaction& reaction, const Grid& grid);
std::vector<ExtendedReal> asymptotes_infty(const Reaction& reaction, const Grid& grid);

// Truncation at level k >= 1; rejects double truncation.
Reaction truncate(const Reaction& reaction, int k);

// Constant c such that |f(x,t)| <= c (1 + |t|^{p-1}) over the grid's spatial
// range; +inf when no such constant exists (upper growth unbounded).
double growth_constant(const Reaction& reaction, const Grid& grid);

struct HypothesesReport {
    enum class H3 { Strict, Nonstrict, Violated };
    bool h2_ok = true;
    double c0_fitted = 0.0;
    H3 h3 = H3::Strict;
    std::vector<std::string> violations;  // bounded sample of offending (x, t)
    bool pass() const { return h2_ok && h3 != H3::Violated; }
};

// Numerically screens the structural hypotheses on a positive strictly
// increasing sample set: upper growth with fitted constant, and monotonicity
// of t -> f(x,t)/t^{p-1} at every node.
HypothesesReport validate_hypotheses(const Reaction& reaction, const Grid& grid,
                                     std::span<const double> t_samples);

} // namespace frap
