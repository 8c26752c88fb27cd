#include "fraplace/reaction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "fraplace/nonlocal.hpp"

namespace frap {

namespace {

double interp_table(const std::vector<double>& ts, const std::vector<double>& fs, double t) {
    if (t <= ts.front()) return fs.front();
    if (t >= ts.back()) return fs.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
    return fs[j - 1] + w * (fs[j] - fs[j - 1]);
}

// exact integral of the piecewise-linear interpolant from 0 to t >= 0
double integral_table(const std::vector<double>& ts, const std::vector<double>& fs, double t) {
    double acc = 0.0;
    double prev_t = 0.0;
    double prev_f = interp_table(ts, fs, 0.0);
    for (std::size_t j = 0; j < ts.size() && ts[j] < t; ++j) {
        if (ts[j] <= prev_t) continue;
        const double fj = fs[j];
        acc += 0.5 * (prev_f + fj) * (ts[j] - prev_t);
        prev_t = ts[j];
        prev_f = fj;
    }
    const double ft = interp_table(ts, fs, t);
    acc += 0.5 * (prev_f + ft) * (t - prev_t);
    return acc;
}

// untruncated autonomous profile at t >= 0
double base_f(const Reaction& re, double t) {
    switch (re.kind) {
        case ReactionKind::Logistic:
            return re.lambda * (std::pow(t, re.q - 1.0) - std::pow(t, re.r - 1.0));
        case ReactionKind::ExponentialPaper:
            if (t <= 1.0)
                return re.lambda * (std::pow(t, re.p - 1.0) - std::pow(t, re.r - 1.0));
            return re.lambda * (std::pow(t, re.p - 1.0) - std::exp(std::pow(t, re.alpha) - 1.0));
        case ReactionKind::PowerCombo:
            return re.c + re.lambda * std::pow(t, re.q - 1.0) +
                   re.mu * std::pow(t, re.r - 1.0);
        case ReactionKind::CustomTabulated:
            return interp_table(re.table_t, re.table_f, t);
    }
    return 0.0;
}

double simpson(const Reaction& re, double x, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth);

// adaptive Simpson of the truncated reaction (used where no closed form exists)
double integrate_f(const Reaction& re, double x, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = eval_f(re, x, a);
    const double fb = eval_f(re, x, b);
    const double fm = eval_f(re, x, 0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(re, x, a, b, fa, fm, fb, whole, tol, 0);
}

double simpson(const Reaction& re, double x, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval_f(re, x, lm), frm = eval_f(re, x, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= 40 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson(re, x, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson(re, x, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double exp_tail_integral(const Reaction& re, double t) {
    // integral of e^{tau^alpha - 1} over [1, t]
    if (re.alpha == 1.0) return std::exp(t - 1.0) - 1.0;
    struct Fn {
        double alpha;
        double operator()(double tau) const { return std::exp(std::pow(tau, alpha) - 1.0); }
    } fn{re.alpha};
    // plain adaptive Simpson on the smooth integrand
    const auto rec = [&fn](auto&& self, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) -> double {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = fn(lm), frm = fn(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth >= 40 || std::fabs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return self(self, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               self(self, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    };
    const double fa = fn(1.0), fb = fn(t), fm = fn(0.5 * (1.0 + t));
    const double whole = (t - 1.0) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(rec, 1.0, t, fa, fm, fb, whole, 1e-13 * std::max(1.0, std::fabs(whole)), 0);
}

// antiderivative of base_f at t >= 0 (untruncated)
double base_F(const Reaction& re, double t) {
    switch (re.kind) {
        case ReactionKind::Logistic:
            return re.lambda * (std::pow(t, re.q) / re.q - std::pow(t, re.r) / re.r);
        case ReactionKind::ExponentialPaper: {
            if (t <= 1.0)
                return re.lambda * (std::pow(t, re.p) / re.p - std::pow(t, re.r) / re.r);
            const double at_one = 1.0 / re.p - 1.0 / re.r;
            return re.lambda * (at_one + (std::pow(t, re.p) - 1.0) / re.p -
                                exp_tail_integral(re, t));
        }
        case ReactionKind::PowerCombo:
            return re.c * t + re.lambda * std::pow(t, re.q) / re.q +
                   re.mu * std::pow(t, re.r) / re.r;
        case ReactionKind::CustomTabulated:
            return integral_table(re.table_t, re.table_f, t);
    }
    return 0.0;
}

// quotient f(x,t)/t^{p-1}; the families below keep it monotone, which the
// closed-form truncated antiderivative relies on
bool quotient_monotone(const Reaction& re) {
    return re.kind == ReactionKind::Logistic || re.kind == ReactionKind::ExponentialPaper;
}

double quotient(const Reaction& re, double x, double t) {
    return re.rho(x) * base_f(re, t) / std::pow(t, re.p - 1.0);
}

// smallest t with rho(x) f0(t) <= -k t^{p-1}; +inf when the clamp never
// activates; requires a monotone quotient
double clamp_breakpoint(const Reaction& re, double x) {
    const int k = *re.k;
    const std::uint64_t key = std::bit_cast<std::uint64_t>(x);
    {
        std::lock_guard<std::mutex> lock(re.bp_cache->mutex);
        const auto it = re.bp_cache->map.find(key);
        if (it != re.bp_cache->map.end()) return it->second;
    }
    const double target = -static_cast<double>(k);
    double t_lo = 1.0, t_hi = 1.0;
    double result;
    if (quotient(re, x, 1.0) > target) {
        while (quotient(re, x, t_hi) > target && t_hi < 1e12) t_hi *= 2.0;
        if (t_hi >= 1e12) {
            result = kInf;  // clamp never active
        } else {
            t_lo = t_hi * 0.5;
            while (t_hi - t_lo > 1e-12 * std::max(1.0, t_lo)) {
                const double m = 0.5 * (t_lo + t_hi);
                (quotient(re, x, m) > target ? t_lo : t_hi) = m;
            }
            result = 0.5 * (t_lo + t_hi);
        }
    } else {
        while (quotient(re, x, t_lo) <= target && t_lo > 1e-14) t_lo *= 0.5;
        if (t_lo <= 1e-14) {
            result = 0.0;  // clamped from the origin on
        } else {
            t_hi = t_lo * 2.0;
            while (t_hi - t_lo > 1e-12 * std::max(1.0, t_lo)) {
                const double m = 0.5 * (t_lo + t_hi);
                (quotient(re, x, m) > target ? t_lo : t_hi) = m;
            }
            result = 0.5 * (t_lo + t_hi);
        }
    }
    std::lock_guard<std::mutex> lock(re.bp_cache->mutex);
    re.bp_cache->map.emplace(key, result);
    return result;
}

} // namespace

double Reaction::rho(double x) const {
    return rho_beta == 0.0 ? 1.0 : std::exp(rho_beta * x);
}

Reaction make_logistic(double p, double lambda, double q, double r) {
    if (!(p > 1.0)) throw std::invalid_argument("logistic: p must exceed 1");
    if (!(1.0 < q && q <= p && p < r))
        throw std::invalid_argument("logistic: need 1 < q <= p < r");
    if (!(lambda > 0.0)) throw std::invalid_argument("logistic: lambda must be positive");
    Reaction re;
    re.kind = ReactionKind::Logistic;
    re.p = p;
    re.lambda = lambda;
    re.q = q;
    re.r = r;
    return re;
}

Reaction make_exponential_paper(double p, double alpha, double r, double lambda) {
    if (!(p > 1.0)) throw std::invalid_argument("exponential_paper: p must exceed 1");
    if (!(alpha >= p - 1.0))
        throw std::invalid_argument("exponential_paper: need alpha >= p - 1");
    if (!(r > p)) throw std::invalid_argument("exponential_paper: need r > p");
    if (!(lambda > 0.0)) throw std::invalid_argument("exponential_paper: lambda must be positive");
    Reaction re;
    re.kind = ReactionKind::ExponentialPaper;
    re.p = p;
    re.alpha = alpha;
    re.r = r;
    re.lambda = lambda;
    return re;
}

Reaction make_power_combo(double p, double c, double lambda, double q, double mu, double r) {
    if (!(p > 1.0)) throw std::invalid_argument("power_combo: p must exceed 1");
    if (!(q > 1.0) || !(r > 1.0))
        throw std::invalid_argument("power_combo: exponents must exceed 1");
    Reaction re;
    re.kind = ReactionKind::PowerCombo;
    re.p = p;
    re.c = c;
    re.lambda = lambda;
    re.q = q;
    re.mu = mu;
    re.r = r;
    return re;
}

Reaction make_custom_tabulated(double p, std::vector<double> t, std::vector<double> f,
                               ExtendedReal a0, ExtendedReal ainf) {
    if (!(p > 1.0)) throw std::invalid_argument("custom_tabulated: p must exceed 1");
    if (t.size() < 2 || t.size() != f.size())
        throw std::invalid_argument("custom_tabulated: need matching t/f tables, length >= 2");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]))
            throw std::invalid_argument("custom_tabulated: t table must be strictly increasing");
    if (!(t.front() >= 0.0))
        throw std::invalid_argument("custom_tabulated: t table must be nonnegative");
    Reaction re;
    re.kind = ReactionKind::CustomTabulated;
    re.p = p;
    re.table_t = std::move(t);
    re.table_f = std::move(f);
    re.decl_a0 = a0;
    re.decl_ainf = ainf;
    return re;
}

double eval_f(const Reaction& reaction, double x, double t) {
    const double tpos = std::max(t, 0.0);
    const double base = reaction.rho(x) * base_f(reaction, tpos);
    if (!reaction.truncated()) return base;
    const double clamp = -static_cast<double>(*reaction.k) * std::pow(tpos, reaction.p - 1.0);
    return std::max(base, clamp);
}

double eval_F(const Reaction& reaction, double x, double t) {
    if (t == 0.0) return 0.0;
    if (t < 0.0) return t * eval_f(reaction, x, -1.0);  // constant rate on t <= 0
    if (!reaction.truncated()) return reaction.rho(x) * base_F(reaction, t);
    if (quotient_monotone(reaction)) {
        const double tstar = clamp_breakpoint(reaction, x);
        if (t <= tstar) return reaction.rho(x) * base_F(reaction, t);
        const double k = static_cast<double>(*reaction.k);
        const double head = tstar > 0.0 ? reaction.rho(x) * base_F(reaction, tstar) : 0.0;
        return head - k / reaction.p *
                          (std::pow(t, reaction.p) - std::pow(tstar, reaction.p));
    }
    return integrate_f(reaction, x, 0.0, t, 1e-12 * std::max(1.0, std::fabs(t)));
}

ExtendedReal asymptote_zero(const Reaction& reaction, double x) {
    const double rho = reaction.rho(x);
    ExtendedReal base;
    switch (reaction.kind) {
        case ReactionKind::Logistic:
            base = reaction.q < reaction.p ? ExtendedReal::plus_inf()
                                           : ExtendedReal::finite(rho * reaction.lambda);
            break;
        case ReactionKind::ExponentialPaper:
            base = ExtendedReal::finite(rho * reaction.lambda);
            break;
        case ReactionKind::PowerCombo: {
            if (reaction.c != 0.0) {
                base = reaction.c > 0.0 ? ExtendedReal::plus_inf() : ExtendedReal::minus_inf();
                break;
            }
            // dominant term as t -> 0+: the smallest exponent of t^{e-p}
            double val = 0.0;
            bool inf_pos = false, inf_neg = false;
            double dominant = kInf;
            double dom_coeff = 0.0;
            if (reaction.lambda != 0.0 && reaction.q - reaction.p < dominant) {
                dominant = reaction.q - reaction.p;
                dom_coeff = reaction.lambda;
            }
            if (reaction.mu != 0.0 && reaction.r - reaction.p < dominant) {
                dominant = reaction.r - reaction.p;
                dom_coeff = reaction.mu;
            }
            if (dominant < 0.0) {
                (dom_coeff > 0.0 ? inf_pos : inf_neg) = true;
            } else if (dominant == 0.0) {
                if (reaction.lambda != 0.0 && reaction.q == reaction.p) val += reaction.lambda;
                if (reaction.mu != 0.0 && reaction.r == reaction.p) val += reaction.mu;
            }
            base = inf_pos   ? ExtendedReal::plus_inf()
                   : inf_neg ? ExtendedReal::minus_inf()
                             : ExtendedReal::finite(rho * val);
            break;
        }
        case ReactionKind::CustomTabulated: {
            const ExtendedReal d = *reaction.decl_a0;
            base = d.is_finite() ? ExtendedReal::finite(rho * d.value()) : d;
            break;
        }
    }
    if (!reaction.truncated()) return base;
    return max(base, -static_cast<double>(*reaction.k));
}

ExtendedReal asymptote_infty(const Reaction& reaction, double x) {
    const double rho = reaction.rho(x);
    ExtendedReal base;
    switch (reaction.kind) {
        case ReactionKind::Logistic:
        case ReactionKind::ExponentialPaper:
            base = ExtendedReal::minus_inf();
            break;
        case ReactionKind::PowerCombo: {
            // dominant term as t -> infinity: the largest exponent of t^{e-p};
            // the constant term contributes t^{1-p} -> 0
            double dominant = -kInf;
            double dom_coeff = 0.0;
            if (reaction.lambda != 0.0 && reaction.q - reaction.p > dominant) {
                dominant = reaction.q - reaction.p;
                dom_coeff = reaction.lambda;
            }
            if (reaction.mu != 0.0 && reaction.r - reaction.p > dominant) {
                dominant = reaction.r - reaction.p;
                dom_coeff = reaction.mu;
            }
            if (dominant > 0.0) {
                base = dom_coeff > 0.0 ? ExtendedReal::plus_inf() : ExtendedReal::minus_inf();
            } else if (dominant == 0.0) {
                double val = 0.0;
                if (reaction.lambda != 0.0 && reaction.q == reaction.p) val += reaction.lambda;
                if (reaction.mu != 0.0 && reaction.r == reaction.p) val += reaction.mu;
                base = ExtendedReal::finite(rho * val);
            } else {
                base = ExtendedReal::finite(0.0);
            }
            break;
        }
        case ReactionKind::CustomTabulated: {
            const ExtendedReal d = *reaction.decl_ainf;
            base = d.is_finite() ? ExtendedReal::finite(rho * d.value()) : d;
            break;
        }
    }
    if (!reaction.truncated()) return base;
    return max(base, -static_cast<double>(*reaction.k));
}

std::vector<ExtendedReal> asymptotes_zero(const Reaction& reaction, const Grid& grid) {
    std::vector<ExtendedReal> out(grid.nodes.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = asymptote_zero(reaction, grid.nodes[i]);
    return out;
}

std::vector<ExtendedReal> asymptotes_infty(const Reaction& reaction, const Grid& grid) {
    std::vector<ExtendedReal> out(grid.nodes.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = asymptote_infty(reaction, grid.nodes[i]);
    return out;
}

Reaction truncate(const Reaction& reaction, int k) {
    if (reaction.truncated())
        throw std::invalid_argument("truncate: reaction is already truncated");
    if (k < 1) throw std::invalid_argument("truncate: k must be >= 1");
    Reaction out = reaction;
    out.k = k;
    out.bp_cache = std::make_shared<Reaction::BreakpointCache>();
    return out;
}

double growth_constant(const Reaction& reaction, const Grid& grid) {
    const double rho_max =
        std::max(reaction.rho(grid.lo), reaction.rho(grid.hi));
    double c0;
    switch (reaction.kind) {
        case ReactionKind::Logistic:
        case ReactionKind::ExponentialPaper:
            c0 = reaction.lambda;  // f <= lambda t^{q-1} with q <= p
            break;
        case ReactionKind::PowerCombo: {
            const bool bounded = (reaction.lambda <= 0.0 || reaction.q <= reaction.p) &&
                                 (reaction.mu <= 0.0 || reaction.r <= reaction.p);
            if (!bounded) return kInf;
            c0 = std::fabs(reaction.c) + std::max(reaction.lambda, 0.0) +
                 std::max(reaction.mu, 0.0);
            break;
        }
        case ReactionKind::CustomTabulated: {
            // tabulated profiles are constant past the last sample
            double fmax = 0.0;
            for (double f : reaction.table_f) fmax = std::max(fmax, std::fabs(f));
            c0 = fmax;
            break;
        }
    }
    c0 *= rho_max;
    if (!reaction.truncated()) return c0;
    const double f0 = std::fabs(rho_max * base_f(reaction, 0.0));
    return std::max({c0, static_cast<double>(*reaction.k), f0});
}

HypothesesReport validate_hypotheses(const Reaction& reaction, const Grid& grid,
                                     std::span<const double> t_samples) {
    if (t_samples.empty())
        throw std::invalid_argument("validate_hypotheses: empty sample set");
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        if (!(t_samples[i] > 0.0))
            throw std::invalid_argument("validate_hypotheses: samples must be positive");
        if (i > 0 && !(t_samples[i] > t_samples[i - 1]))
            throw std::invalid_argument("validate_hypotheses: samples must be strictly increasing");
    }

    HypothesesReport rep;
    double c0 = 0.0;
    bool ties = false;
    // quotient of the final three samples, for the growth trend heuristic
    std::vector<double> tail_growth;

    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.nodes[i];
        double prev_q = kInf;
        bool have_prev = false;
        for (std::size_t j = 0; j < t_samples.size(); ++j) {
            const double t = t_samples[j];
            const double f = eval_f(reaction, x, t);
            const double growth_q = f / (1.0 + std::pow(t, reaction.p - 1.0));
            c0 = std::max(c0, growth_q);
            if (i == 0 && j + 3 >= t_samples.size()) tail_growth.push_back(growth_q);

            const double qv = f / std::pow(t, reaction.p - 1.0);
            if (have_prev && std::isfinite(prev_q) && std::isfinite(qv)) {
                const double drop = prev_q - qv;
                const double scale = std::max(1.0, std::fabs(prev_q));
                if (drop < -1e-12 * scale) {
                    rep.h3 = HypothesesReport::H3::Violated;
                    if (rep.violations.size() < 8)
                        rep.violations.push_back("quotient increases at x=" + std::to_string(x) +
                                                 ", t=" + std::to_string(t));
                } else if (drop <= 1e-12 * scale) {
                    ties = true;
                }
            }
            prev_q = qv;
            have_prev = true;
        }
    }
    rep.c0_fitted = std::max(c0, 0.0);
    if (rep.h3 != HypothesesReport::H3::Violated && ties)
        rep.h3 = HypothesesReport::H3::Nonstrict;
    // upper growth looks unbounded when the fitted quotient keeps climbing
    // through the last samples and peaks at the end
    if (tail_growth.size() >= 3) {
        const bool climbing = tail_growth[0] < tail_growth[1] && tail_growth[1] < tail_growth[2];
        if (climbing && tail_growth[2] >= rep.c0_fitted * (1.0 - 1e-12) && tail_growth[2] > 0.0)
            rep.h2_ok = false;
    }
    return rep;
}

} // namespace frap
