#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fraplace/config.hpp"
#include "fraplace/io.hpp"
#include "fraplace/nonlocal.hpp"
#include "fraplace/solver.hpp"
#include "fraplace/spectral.hpp"
#include "fraplace/verify.hpp"

namespace {

using namespace frap;

constexpr const char* kSchemaVersion = "fraplace/1";

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitViolation = 3;

struct CommonArgs {
    std::string config_path;
    int workers = 0;  // 0 = unset, fall back to FRAPLACE_WORKERS, then 1
    bool overwrite = false;
};

int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("FRAPLACE_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

Config load_with_overrides(const CommonArgs& args, const std::vector<std::string>& extras) {
    std::ifstream in(args.config_path);
    if (!in) throw std::invalid_argument("config error: cannot open '" + args.config_path + "'");
    json raw;
    try {
        in >> raw;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config error: " + std::string(e.what()));
    }
    for (const auto& extra : extras) {
        if (extra.rfind("--", 0) != 0)
            throw std::invalid_argument("unrecognized argument '" + extra + "'");
        const std::size_t eq = extra.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override '" + extra + "' must look like --key.path=value");
        apply_override(raw, extra.substr(2, eq - 2), extra.substr(eq + 1));
    }
    Config cfg = parse_config(raw);
    return cfg;
}

std::vector<ExtendedReal> parse_weight_spec(const std::string& spec, const Grid& grid,
                                            const Reaction& reaction) {
    std::vector<ExtendedReal> a(grid.n, ExtendedReal::finite(0.0));
    if (spec == "zero") return a;
    if (spec.rfind("const:", 0) == 0) {
        const double c = std::stod(spec.substr(6));
        for (auto& x : a) x = ExtendedReal::finite(c);
        return a;
    }
    if (spec == "a0") return asymptotes_zero(reaction, grid);
    if (spec == "ainf") return asymptotes_infty(reaction, grid);
    throw std::invalid_argument("weight spec '" + spec +
                                "' is not one of zero | const:<c> | a0 | ainf");
}

json base_document(const Config& cfg) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = config_to_json(cfg);
    return doc;
}

int run_eigen(const Config& cfg, const std::string& weight_spec, bool overwrite) {
    const Grid grid = build_grid(cfg.lo, cfg.hi, cfg.n);
    const Kernel kernel = assemble_kernel(grid, cfg.s, cfg.p);
    const auto a = parse_weight_spec(weight_spec, grid, cfg.reaction);

    const EigenResult res = principal_eigenpair(kernel, grid, a, cfg.eigen);

    const auto dir = resolve_output_dir(cfg.output_dir, overwrite);
    if (cfg.out_json) {
        json doc = base_document(cfg);
        doc["weight"] = weight_spec;
        doc["result"] = eigen_result_to_json(res);
        write_json(dir / "eigen_result.json", doc);
    }
    if (!res.v.empty()) {
        const auto ds = boundary_power(grid, cfg.s);
        if (cfg.out_csv) {
            std::vector<double> ratio(grid.n);
            for (int i = 0; i < grid.n; ++i) ratio[i] = res.v[i] / ds[i];
            write_csv(dir / "eigenfunction.csv", {"x", "v", "d_s", "v_over_d_s"},
                      {grid.nodes, res.v, ds, ratio});
        }
        if (cfg.out_svg)
            write_svg_plot(dir / "eigenfunction.svg", "principal eigenfunction", "x", "v(x)",
                           {{"v", grid.nodes, res.v}, {"d^s", grid.nodes, ds}});
    }
    std::cout << "eigen: lambda = " << res.lambda.str() << ", residual = " << res.residual
              << ", outputs in " << dir.string() << "\n";
    return res.converged ? kExitOk : kExitConvergence;
}

int run_criterion(const Config& cfg, bool overwrite) {
    const Grid grid = build_grid(cfg.lo, cfg.hi, cfg.n);
    const Kernel kernel = assemble_kernel(grid, cfg.s, cfg.p);
    const CriterionVerdict verdict = evaluate_criterion(kernel, grid, cfg.reaction, cfg.eigen);

    const auto dir = resolve_output_dir(cfg.output_dir, overwrite);
    if (cfg.out_json) {
        json doc = base_document(cfg);
        doc["verdict"] = criterion_verdict_to_json(verdict);
        write_json(dir / "criterion.json", doc);
    }
    std::cout << "criterion: lambda1(a0) = " << verdict.lambda_a0.str()
              << ", lambda1(a_inf) = " << verdict.lambda_ainf.str()
              << ", solvable = " << (verdict.solvable ? "yes" : "no") << "\n";
    return kExitOk;
}

int run_solve(const Config& cfg, bool overwrite) {
    const Grid grid = build_grid(cfg.lo, cfg.hi, cfg.n);
    const Kernel kernel = assemble_kernel(grid, cfg.s, cfg.p);
    const CriterionVerdict verdict = evaluate_criterion(kernel, grid, cfg.reaction, cfg.eigen);

    SolveResult res;
    if (verdict.solvable) {
        res = minimize_escalating(kernel, grid, cfg.reaction, cfg.solver);
    } else {
        res.u.assign(grid.n, 0.0);
        res.converged = true;
        res.classification = "no_positive_solution";
    }
    res.lambda_a0 = verdict.lambda_a0;
    res.lambda_ainf = verdict.lambda_ainf;
    res.solvable = verdict.solvable;

    const auto dir = resolve_output_dir(cfg.output_dir, overwrite);
    if (cfg.out_json) {
        json doc = base_document(cfg);
        doc["verdict"] = criterion_verdict_to_json(verdict);
        doc["result"] = solve_result_to_json(res);
        if (res.classification == "positive_solution") {
            PropertyReport necessity;
            necessity.property = "necessity";
            necessity.trials = 1;
            necessity.worst_margin = verdict.solvable ? 0.0 : -1.0;
            if (!verdict.solvable) necessity.violations = 1;
            doc["necessity"] = property_report_to_json(necessity);
        }
        write_json(dir / "solve_result.json", doc);
    }
    if (cfg.out_csv || cfg.out_svg) {
        const auto ds = boundary_power(grid, cfg.s);
        if (cfg.out_csv) {
            std::vector<double> ratio(grid.n);
            for (int i = 0; i < grid.n; ++i) ratio[i] = res.u[i] / ds[i];
            write_csv(dir / "solution.csv", {"x", "u", "d_s", "u_over_d_s"},
                      {grid.nodes, res.u, ds, ratio});
        }
        if (cfg.out_svg)
            write_svg_plot(dir / "solution.svg", "solution and boundary profile", "x", "u(x)",
                           {{"u", grid.nodes, res.u}, {"d^s", grid.nodes, ds}});
    }
    std::cout << "solve: " << res.classification << ", sup_u = "
              << lp_norm_measure(1.0, res.u, kInf) << ", phi = " << res.phi
              << ", k_final = " << res.k_final << ", outputs in " << dir.string() << "\n";
    if (!res.converged && res.classification != "no_positive_solution")
        return kExitConvergence;
    return kExitOk;
}

int run_verify(const Config& cfg, const std::vector<std::string>& properties, long trials,
               bool overwrite) {
    const Grid grid = build_grid(cfg.lo, cfg.hi, cfg.n);
    const Kernel kernel = assemble_kernel(grid, cfg.s, cfg.p);
    const int workers = cfg.solver.workers;

    std::vector<PropertyReport> reports;
    for (const auto& name : properties) {
        if (name == "picone") {
            const double ps[] = {1.5, 2.0, 3.0};
            reports.push_back(check_picone(ps, trials > 0 ? trials : 100000, cfg.seed, workers));
        } else if (name == "submodularity") {
            reports.push_back(
                check_submodularity(kernel, trials > 0 ? trials : 10000, cfg.seed, workers));
        } else if (name == "comparison") {
            reports.push_back(
                check_comparison_random(kernel, trials > 0 ? trials : 1000, cfg.seed, workers));
        } else if (name == "quotient_bound") {
            reports.push_back(check_quotient_bound_random(grid, cfg.s, cfg.p,
                                                          trials > 0 ? trials : 100, cfg.seed));
        } else if (name == "selftest_tampered") {
            reports.push_back(check_harness_selftest());
        } else {
            throw std::invalid_argument(
                "property '" + name +
                "' is not one of picone | submodularity | comparison | quotient_bound | "
                "selftest_tampered");
        }
    }

    long total_violations = 0;
    for (const auto& r : reports) total_violations += r.violations;

    const auto dir = resolve_output_dir(cfg.output_dir, overwrite);
    if (cfg.out_json) {
        json doc = base_document(cfg);
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(property_report_to_json(r));
        doc["reports"] = arr;
        doc["total_violations"] = total_violations;
        write_json(dir / "verify_report.json", doc);
    }
    for (const auto& r : reports)
        std::cout << "verify: " << r.property << ": " << r.trials << " trials, "
                  << r.violations << " violations, worst margin "
                  << (r.worst_margin == kInf ? 0.0 : r.worst_margin) << "\n";
    return total_violations > 0 ? kExitViolation : kExitOk;
}

int run_sweep(const Config& cfg, double lo, double hi, int steps, bool overwrite) {
    if (cfg.reaction.kind != ReactionKind::Logistic || cfg.reaction.q != cfg.p)
        throw std::invalid_argument(
            "sweep requires a logistic reaction with q = p (constant a0 shift)");
    if (steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");

    const Grid grid = build_grid(cfg.lo, cfg.hi, cfg.n);
    const Kernel kernel = assemble_kernel(grid, cfg.s, cfg.p);

    const std::vector<ExtendedReal> zero(grid.n, ExtendedReal::finite(0.0));
    const EigenResult base = principal_eigenpair(kernel, grid, zero, cfg.eigen);
    const double lambda1_zero = base.lambda.value();

    std::vector<double> lambdas, sup_us, phis, verdicts;
    const int npts = (lo == hi) ? 1 : steps;
    bool any_failed = false;
    for (int i = 0; i < npts; ++i) {
        const double lam = (npts == 1) ? lo : lo + (hi - lo) * i / (npts - 1);
        Reaction re = make_logistic(cfg.p, lam, cfg.reaction.q, cfg.reaction.r);
        re.rho_beta = cfg.reaction.rho_beta;

        const auto [la0, lainf] = criterion_lambdas(kernel, grid, re, cfg.eigen);
        const bool solvable =
            la0 < ExtendedReal::finite(0.0) && ExtendedReal::finite(0.0) < lainf;

        // empirical side: minimize regardless of the verdict, so the onset of
        // a nonzero solution is observed rather than assumed
        SolveResult res = minimize_escalating(kernel, grid, re, cfg.solver);
        if (!res.converged && res.classification != "no_positive_solution") any_failed = true;

        lambdas.push_back(lam);
        sup_us.push_back(lp_norm_measure(1.0, res.u, kInf));
        phis.push_back(res.phi);
        verdicts.push_back(solvable ? 1.0 : 0.0);
    }

    const double onset_threshold = 1e-4;
    double onset_lambda = kInf, flip_lambda = kInf;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (onset_lambda == kInf && sup_us[i] > onset_threshold) onset_lambda = lambdas[i];
        if (flip_lambda == kInf && verdicts[i] > 0.5) flip_lambda = lambdas[i];
    }
    const double step_size = npts > 1 ? (hi - lo) / (npts - 1) : 0.0;
    const bool bracketed =
        onset_lambda != kInf && std::fabs(onset_lambda - lambda1_zero) <= step_size + 1e-12;

    const auto dir = resolve_output_dir(cfg.output_dir, overwrite);
    if (cfg.out_csv)
        write_csv(dir / "sweep.csv", {"lambda", "sup_u", "phi", "verdict"},
                  {lambdas, sup_us, phis, verdicts});
    if (cfg.out_svg)
        write_svg_plot(dir / "sweep.svg", "existence sweep", "lambda", "sup u",
                       {{"sup_u", lambdas, sup_us}});
    if (cfg.out_json) {
        json doc = base_document(cfg);
        doc["sweep"] = {{"lambda_lo", lo},
                        {"lambda_hi", hi},
                        {"steps", npts},
                        {"lambda1_zero", lambda1_zero},
                        {"onset_threshold", onset_threshold},
                        {"onset_lambda", onset_lambda == kInf ? json("none") : json(onset_lambda)},
                        {"verdict_flip_lambda",
                         flip_lambda == kInf ? json("none") : json(flip_lambda)},
                        {"bracketed", bracketed}};
        write_json(dir / "sweep.json", doc);
    }
    std::cout << "sweep: lambda1(0) = " << lambda1_zero << ", onset = "
              << (onset_lambda == kInf ? std::string("none") : std::to_string(onset_lambda))
              << ", bracketed = " << (bracketed ? "yes" : "no") << ", outputs in "
              << dir.string() << "\n";
    return any_failed ? kExitConvergence : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraplace: fractional p-Laplacian Dirichlet solver and property tester"};
    app.require_subcommand(1);
    app.allow_extras();

    CommonArgs common;
    std::string weight_spec = "zero";
    std::vector<std::string> properties = {"picone", "submodularity", "comparison",
                                           "quotient_bound"};
    long trials = 0;
    double lambda_lo = 0.0, lambda_hi = 0.0;
    int steps = 20;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON configuration file")->required();
        sub->add_option("--workers", common.workers,
                        "parallel workers (default: FRAPLACE_WORKERS or 1)");
        sub->add_flag("--overwrite", common.overwrite,
                      "write into output.dir directly instead of a run-stamped subdirectory");
        sub->allow_extras();
    };

    CLI::App* cmd_eigen = app.add_subcommand("eigen", "weighted principal eigenpair");
    add_common(cmd_eigen);
    cmd_eigen->add_option("--weight", weight_spec, "weight: zero | const:<c> | a0 | ainf");

    CLI::App* cmd_solve = app.add_subcommand("solve", "criterion + energy minimization");
    add_common(cmd_solve);

    CLI::App* cmd_criterion = app.add_subcommand("criterion", "solvability verdict only");
    add_common(cmd_criterion);

    CLI::App* cmd_verify = app.add_subcommand("verify", "randomized property checks");
    add_common(cmd_verify);
    cmd_verify->add_option("--properties", properties,
                           "picone | submodularity | comparison | quotient_bound | "
                           "selftest_tampered (repeatable; 'none' for empty)")
        ->delimiter(',');
    cmd_verify->add_option("--trials", trials, "trial count override (0 = per-property default)");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "lambda sweep for the logistic family");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--lambda-lo", lambda_lo, "sweep lower bound")->required();
    cmd_sweep->add_option("--lambda-hi", lambda_hi, "sweep upper bound")->required();
    cmd_sweep->add_option("--steps", steps, "number of sweep points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        Config cfg = load_with_overrides(common, sub->remaining());
        const int workers = resolve_workers(common.workers);
        cfg.solver.workers = workers;
        cfg.eigen.workers = workers;
        cfg.solver.eigen.workers = workers;

        if (sub == cmd_eigen) return run_eigen(cfg, weight_spec, common.overwrite);
        if (sub == cmd_solve) return run_solve(cfg, common.overwrite);
        if (sub == cmd_criterion) return run_criterion(cfg, common.overwrite);
        if (sub == cmd_verify) {
            if (properties.size() == 1 && properties.front() == "none") properties.clear();
            return run_verify(cfg, properties, trials, common.overwrite);
        }
        if (sub == cmd_sweep) return run_sweep(cfg, lambda_lo, lambda_hi, steps, common.overwrite);
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConvergence;
    }
}
