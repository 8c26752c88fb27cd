#include "fraplace/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <stdexcept>

#include "fraplace/reduce.hpp"
#include "fraplace/rng.hpp"

namespace frap {

namespace {

void check_weights_dim(const Kernel& kernel, std::span<const ExtendedReal> a) {
    if (static_cast<int>(a.size()) != kernel.n)
        throw std::invalid_argument("spectral: weight array length does not match kernel");
}

struct RayleighParts {
    double energy;
    double weighted;  // sum a_i |v_i|^p h over the support
    double denom;     // sum |v_i|^p h
};

RayleighParts rayleigh_parts(const Kernel& kernel, std::span<const ExtendedReal> a,
                             const Field& v, int workers) {
    const double p = kernel.p;
    const double h = kernel.measure;
    std::vector<double> wterm(v.size()), dterm(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = pow_abs(v[i], p) * h;
        dterm[i] = m;
        if (v[i] != 0.0) {
            if (!a[i].is_finite())
                throw std::invalid_argument(
                    "rayleigh_quotient: infinite weight met by nonzero field entry");
            wterm[i] = a[i].value() * m;
        } else {
            wterm[i] = 0.0;
        }
    }
    RayleighParts parts;
    parts.energy = gagliardo_energy(kernel, v, workers);
    parts.weighted = pairwise_sum(wterm);
    parts.denom = pairwise_sum(dterm);
    return parts;
}

// strong-form residual of the Euler-Lagrange equation of (the discrete)
// weighted eigenproblem: sup_i |g_i/h - (a_i + lambda) j_p(v_i)|
double el_residual(const Kernel& kernel, std::span<const ExtendedReal> a, const Field& v,
                   const Field& g, double lambda, const std::vector<char>& mask) {
    const double h = kernel.measure;
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mask[i]) continue;
        const double r = g[i] / h - (a[i].value() + lambda) * jp(kernel.p, v[i]);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

void project_mask(Field& v, const std::vector<char>& mask) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = mask[i] ? std::fabs(v[i]) : 0.0;
}

void normalize_p(const Kernel& kernel, Field& v) {
    const double nrm = lp_norm_measure(kernel.measure, v, kernel.p);
    if (!(nrm > 0.0)) throw std::invalid_argument("spectral: zero field");
    for (double& x : v) x /= nrm;
}

struct DescentOutcome {
    double lambda = 0.0;
    Field v;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

DescentOutcome descend(const Kernel& kernel, std::span<const ExtendedReal> a,
                       const std::vector<char>& mask, Field v, const DescentOptions& opts) {
    const double p = kernel.p;
    const double h = kernel.measure;
    project_mask(v, mask);
    normalize_p(kernel, v);

    std::deque<double> window;
    double step = 1.0;
    double lambda = 0.0, residual = 0.0;
    bool converged = false;
    int iter = 0;

    Field g;
    for (; iter < opts.max_iter; ++iter) {
        g = apply_operator(kernel, v, opts.workers);
        const RayleighParts parts = rayleigh_parts(kernel, a, v, opts.workers);
        lambda = (parts.energy - parts.weighted) / parts.denom;
        residual = el_residual(kernel, a, v, g, lambda, mask);
        if (residual < opts.tol) {
            converged = true;
            break;
        }
        window.push_back(lambda);
        if (window.size() > 10) {
            const double drop = window.front() - lambda;
            window.pop_front();
            if (drop < 1e-12 * std::max(1.0, std::fabs(lambda))) {
                converged = true;
                break;
            }
        }

        Field grad(v.size(), 0.0);
        double gnorm2 = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!mask[i]) continue;
            grad[i] = p / parts.denom *
                      (g[i] - (a[i].value() + lambda) * jp(p, v[i]) * h);
            gnorm2 += grad[i] * grad[i];
        }
        if (gnorm2 == 0.0) {
            converged = true;
            break;
        }

        // Armijo backtracking, trial step warm-started from the last accept
        double trial = std::min(1.0, step * 2.0);
        Field cand(v.size());
        bool accepted = false;
        while (trial > 1e-20) {
            for (std::size_t i = 0; i < v.size(); ++i) cand[i] = v[i] - trial * grad[i];
            project_mask(cand, mask);
            const double nrm = lp_norm_measure(h, cand, p);
            if (nrm > 0.0) {
                for (double& x : cand) x /= nrm;
                const RayleighParts cp = rayleigh_parts(kernel, a, cand, opts.workers);
                const double lam_c = (cp.energy - cp.weighted) / cp.denom;
                if (lam_c <= lambda - 1e-4 * trial * gnorm2) {
                    v = cand;
                    step = trial;
                    accepted = true;
                    break;
                }
            }
            trial *= 0.5;
        }
        if (!accepted) {
            converged = true;  // no descent direction left at float resolution
            break;
        }
    }

    DescentOutcome out;
    out.lambda = lambda;
    out.v = std::move(v);
    out.residual = residual;
    out.iterations = iter;
    out.converged = converged;
    return out;
}

} // namespace

double rayleigh_quotient(const Kernel& kernel, const Grid& grid,
                         std::span<const ExtendedReal> a, const Field& v) {
    (void)grid;
    check_weights_dim(kernel, a);
    const RayleighParts parts = rayleigh_parts(kernel, a, v, 1);
    if (!(parts.denom > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero field");
    return (parts.energy - parts.weighted) / parts.denom;
}

EigenResult principal_eigenpair(const Kernel& kernel, const Grid& grid,
                                std::span<const ExtendedReal> a,
                                const DescentOptions& opts) {
    (void)grid;
    check_weights_dim(kernel, a);

    for (const auto& ai : a) {
        if (ai.is_plus_inf()) {
            EigenResult res;
            res.lambda = ExtendedReal::minus_inf();
            res.converged = true;
            return res;
        }
    }
    std::vector<char> mask(a.size());
    int admissible = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mask[i] = a[i].is_finite() ? 1 : 0;
        admissible += mask[i];
    }
    if (admissible == 0) {
        EigenResult res;
        res.lambda = ExtendedReal::plus_inf();
        res.converged = true;
        return res;
    }

    CounterRng rng(opts.seed);
    DescentOutcome best;
    bool have_best = false;
    int total_iters = 0;
    const int starts = 1 + std::max(0, opts.restarts);
    for (int start = 0; start < starts; ++start) {
        Field v0(a.size(), 0.0);
        if (start == 0) {
            for (std::size_t i = 0; i < v0.size(); ++i) v0[i] = mask[i] ? 1.0 : 0.0;
        } else {
            for (std::size_t i = 0; i < v0.size(); ++i)
                v0[i] = mask[i] ? 0.1 + rng.uniform01(static_cast<std::uint64_t>(start), i) : 0.0;
        }
        DescentOutcome out = descend(kernel, a, mask, std::move(v0), opts);
        total_iters += out.iterations;
        if (!have_best || out.lambda < best.lambda) {
            best = std::move(out);
            have_best = true;
        }
    }

    EigenResult res;
    res.lambda = ExtendedReal::finite(best.lambda);
    res.v = std::move(best.v);
    res.residual = best.residual;
    res.iterations = total_iters;
    res.converged = best.converged;
    return res;
}

EigenResult dense_oracle_p2(const Kernel& kernel, const Grid& grid,
                            std::span<const double> a) {
    (void)grid;
    if (kernel.p != 2.0)
        throw std::invalid_argument("dense_oracle_p2: kernel must have p = 2");
    if (static_cast<int>(a.size()) != kernel.n)
        throw std::invalid_argument("dense_oracle_p2: weight array length mismatch");

    const int n = kernel.n;
    const double h = kernel.measure;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = kernel.w(i, j);
            rowsum += w;
            A(i, j) = -2.0 * w / h;
        }
        A(i, i) = (2.0 * rowsum + kernel.tail[i]) / h - a[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense_oracle_p2: eigensolver failed");

    const double lambda = solver.eigenvalues()(0);
    Eigen::VectorXd vec = solver.eigenvectors().col(0);
    if (vec.mean() < 0.0) vec = -vec;

    EigenResult res;
    res.lambda = ExtendedReal::finite(lambda);
    res.v.resize(n);
    const double scale = 1.0 / std::sqrt(h);
    for (int i = 0; i < n; ++i) res.v[i] = std::fabs(vec(i)) * scale;
    res.converged = true;

    std::vector<ExtendedReal> ax(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) ax[i] = ExtendedReal::finite(a[i]);
    const Field g = apply_operator(kernel, res.v);
    res.residual = el_residual(kernel, ax, res.v, g, lambda, std::vector<char>(n, 1));
    return res;
}

MonotonicityReport lambda_monotonicity_check(const Kernel& kernel, const Grid& grid,
                                             std::span<const ExtendedReal> a,
                                             std::span<const ExtendedReal> b,
                                             const DescentOptions& opts, double tol) {
    check_weights_dim(kernel, a);
    check_weights_dim(kernel, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] <= b[i]))
            throw std::invalid_argument("lambda_monotonicity_check: requires a <= b pointwise");

    MonotonicityReport rep;
    rep.lambda_a = principal_eigenpair(kernel, grid, a, opts).lambda;
    rep.lambda_b = principal_eigenpair(kernel, grid, b, opts).lambda;
    if (rep.lambda_a.is_finite() && rep.lambda_b.is_finite()) {
        rep.slack = rep.lambda_a.value() - rep.lambda_b.value();
        rep.ok = rep.slack >= -tol;
    } else {
        rep.ok = rep.lambda_a >= rep.lambda_b;
    }
    return rep;
}

} // namespace frap
