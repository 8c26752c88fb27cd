#include "fraplace/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace frap {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key))
            throw std::invalid_argument("config error: unknown key '" +
                                        (where.empty() ? key : where + "." + key) + "'");
    }
}

double need_number(const json& j, const std::string& path) {
    if (!j.is_number())
        throw std::invalid_argument("config error: " + path + " must be a number");
    return j.get<double>();
}

int need_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw std::invalid_argument("config error: " + path + " must be an integer");
    return j.get<int>();
}

ExtendedReal extended_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return ExtendedReal::finite(j.get<double>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return ExtendedReal::plus_inf();
        if (s == "-inf") return ExtendedReal::minus_inf();
    }
    throw std::invalid_argument("config error: " + path + " must be a number, \"+inf\" or \"-inf\"");
}

json extended_to_json(const ExtendedReal& x) {
    if (x.is_plus_inf()) return json("+inf");
    if (x.is_minus_inf()) return json("-inf");
    return json(x.value());
}

} // namespace

Reaction reaction_from_json(const json& j, double p) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("config error: reaction must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();

    Reaction re;
    if (kind == "logistic") {
        reject_unknown(j, {"kind", "lambda", "q", "r", "k", "rho_beta"}, "reaction");
        re = make_logistic(p, need_number(j.at("lambda"), "reaction.lambda"),
                           need_number(j.at("q"), "reaction.q"),
                           need_number(j.at("r"), "reaction.r"));
    } else if (kind == "exponential_paper") {
        reject_unknown(j, {"kind", "lambda", "alpha", "r", "k", "rho_beta"}, "reaction");
        re = make_exponential_paper(p, need_number(j.at("alpha"), "reaction.alpha"),
                                    need_number(j.at("r"), "reaction.r"),
                                    j.contains("lambda")
                                        ? need_number(j.at("lambda"), "reaction.lambda")
                                        : 1.0);
    } else if (kind == "power_combo") {
        reject_unknown(j, {"kind", "c", "lambda", "q", "mu", "r", "k", "rho_beta"}, "reaction");
        re = make_power_combo(
            p, j.contains("c") ? need_number(j.at("c"), "reaction.c") : 0.0,
            need_number(j.at("lambda"), "reaction.lambda"),
            need_number(j.at("q"), "reaction.q"),
            j.contains("mu") ? need_number(j.at("mu"), "reaction.mu") : 0.0,
            j.contains("r") ? need_number(j.at("r"), "reaction.r") : 2.0);
    } else if (kind == "custom_tabulated") {
        reject_unknown(j, {"kind", "t", "f", "a0", "ainf", "k", "rho_beta"}, "reaction");
        if (!j.contains("a0") || !j.contains("ainf"))
            throw std::invalid_argument(
                "config error: reaction.a0 and reaction.ainf must be declared for "
                "custom_tabulated reactions");
        re = make_custom_tabulated(p, j.at("t").get<std::vector<double>>(),
                                   j.at("f").get<std::vector<double>>(),
                                   extended_from_json(j.at("a0"), "reaction.a0"),
                                   extended_from_json(j.at("ainf"), "reaction.ainf"));
    } else {
        throw std::invalid_argument("config error: reaction.kind '" + kind +
                                    "' is not one of logistic | exponential_paper | "
                                    "power_combo | custom_tabulated");
    }
    if (j.contains("rho_beta")) re.rho_beta = need_number(j.at("rho_beta"), "reaction.rho_beta");
    if (j.contains("k")) {
        const int k = need_int(j.at("k"), "reaction.k");
        re = truncate(re, k);
    }
    return re;
}

json reaction_to_json(const Reaction& re) {
    json j;
    switch (re.kind) {
        case ReactionKind::Logistic:
            j["kind"] = "logistic";
            j["lambda"] = re.lambda;
            j["q"] = re.q;
            j["r"] = re.r;
            break;
        case ReactionKind::ExponentialPaper:
            j["kind"] = "exponential_paper";
            j["lambda"] = re.lambda;
            j["alpha"] = re.alpha;
            j["r"] = re.r;
            break;
        case ReactionKind::PowerCombo:
            j["kind"] = "power_combo";
            j["c"] = re.c;
            j["lambda"] = re.lambda;
            j["q"] = re.q;
            j["mu"] = re.mu;
            j["r"] = re.r;
            break;
        case ReactionKind::CustomTabulated:
            j["kind"] = "custom_tabulated";
            j["t"] = re.table_t;
            j["f"] = re.table_f;
            j["a0"] = extended_to_json(*re.decl_a0);
            j["ainf"] = extended_to_json(*re.decl_ainf);
            break;
    }
    if (re.rho_beta != 0.0) j["rho_beta"] = re.rho_beta;
    if (re.k) j["k"] = *re.k;
    return j;
}

Config parse_config(const json& j) {
    reject_unknown(j, {"domain", "s", "p", "reaction", "solver", "eigen", "seed", "output"},
                   "");
    Config cfg;

    if (!j.contains("domain"))
        throw std::invalid_argument("config error: missing 'domain'");
    const json& dom = j.at("domain");
    reject_unknown(dom, {"lo", "hi", "n"}, "domain");
    cfg.lo = need_number(dom.at("lo"), "domain.lo");
    cfg.hi = need_number(dom.at("hi"), "domain.hi");
    cfg.n = need_int(dom.at("n"), "domain.n");
    if (!(cfg.hi > cfg.lo))
        throw std::invalid_argument("config error: domain.hi must exceed domain.lo");
    if (cfg.n < 2)
        throw std::invalid_argument("config error: domain.n must be >= 2 (got " +
                                    std::to_string(cfg.n) + ")");

    cfg.s = need_number(j.at("s"), "s");
    if (!(cfg.s > 0.0 && cfg.s < 1.0))
        throw std::invalid_argument("config error: s must lie in (0,1)");
    cfg.p = need_number(j.at("p"), "p");
    if (!(cfg.p > 1.0)) throw std::invalid_argument("config error: p must exceed 1");

    if (!j.contains("reaction"))
        throw std::invalid_argument("config error: missing 'reaction'");
    cfg.reaction = reaction_from_json(j.at("reaction"), cfg.p);

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s,
                       {"tol", "max_iter", "starts", "k_max", "stabilize_tol",
                        "zero_threshold", "boundary_fraction", "uniqueness_tol"},
                       "solver");
        if (s.contains("tol")) cfg.solver.tol = need_number(s.at("tol"), "solver.tol");
        if (s.contains("max_iter"))
            cfg.solver.max_iter = need_int(s.at("max_iter"), "solver.max_iter");
        if (s.contains("starts")) cfg.solver.starts = need_int(s.at("starts"), "solver.starts");
        if (s.contains("k_max")) cfg.solver.k_max = need_int(s.at("k_max"), "solver.k_max");
        if (s.contains("stabilize_tol"))
            cfg.solver.stabilize_tol = need_number(s.at("stabilize_tol"), "solver.stabilize_tol");
        if (s.contains("zero_threshold"))
            cfg.solver.zero_threshold =
                need_number(s.at("zero_threshold"), "solver.zero_threshold");
        if (s.contains("boundary_fraction"))
            cfg.solver.boundary_fraction =
                need_number(s.at("boundary_fraction"), "solver.boundary_fraction");
        if (s.contains("uniqueness_tol"))
            cfg.solver.uniqueness_tol =
                need_number(s.at("uniqueness_tol"), "solver.uniqueness_tol");
        if (!(cfg.solver.tol > 0.0))
            throw std::invalid_argument("config error: solver.tol must be positive");
        if (cfg.solver.max_iter < 1)
            throw std::invalid_argument("config error: solver.max_iter must be >= 1");
        if (cfg.solver.starts < 1)
            throw std::invalid_argument("config error: solver.starts must be >= 1");
        if (cfg.solver.k_max < 1)
            throw std::invalid_argument("config error: solver.k_max must be >= 1");
        if (!(cfg.solver.stabilize_tol > 0.0))
            throw std::invalid_argument("config error: solver.stabilize_tol must be positive");
        if (!(cfg.solver.boundary_fraction > 0.0 && cfg.solver.boundary_fraction <= 0.5))
            throw std::invalid_argument(
                "config error: solver.boundary_fraction must lie in (0, 0.5]");
    }

    if (j.contains("eigen")) {
        const json& e = j.at("eigen");
        reject_unknown(e, {"tol", "max_iter", "restarts"}, "eigen");
        if (e.contains("tol")) cfg.eigen.tol = need_number(e.at("tol"), "eigen.tol");
        if (e.contains("max_iter"))
            cfg.eigen.max_iter = need_int(e.at("max_iter"), "eigen.max_iter");
        if (e.contains("restarts"))
            cfg.eigen.restarts = need_int(e.at("restarts"), "eigen.restarts");
        if (!(cfg.eigen.tol > 0.0))
            throw std::invalid_argument("config error: eigen.tol must be positive");
        if (cfg.eigen.max_iter < 1)
            throw std::invalid_argument("config error: eigen.max_iter must be >= 1");
        if (cfg.eigen.restarts < 0)
            throw std::invalid_argument("config error: eigen.restarts must be >= 0");
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer())
            throw std::invalid_argument("config error: seed must be an integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown(o, {"dir", "formats"}, "output");
        if (o.contains("dir")) cfg.output_dir = o.at("dir").get<std::string>();
        if (o.contains("formats")) {
            cfg.out_json = cfg.out_csv = cfg.out_svg = false;
            for (const auto& f : o.at("formats")) {
                const std::string fmt = f.get<std::string>();
                if (fmt == "json") cfg.out_json = true;
                else if (fmt == "csv") cfg.out_csv = true;
                else if (fmt == "svg") cfg.out_svg = true;
                else
                    throw std::invalid_argument("config error: output.formats entry '" + fmt +
                                                "' is not one of json | csv | svg");
            }
        }
    }

    cfg.solver.seed = cfg.seed;
    cfg.eigen.seed = cfg.seed;
    cfg.solver.eigen = cfg.eigen;
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config error: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config error: " + std::string(e.what()));
    }
    return parse_config(j);
}

void apply_override(json& j, const std::string& key_path, const std::string& value) {
    json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = key_path.find('.', pos);
        const std::string key = key_path.substr(pos, dot - pos);
        if (key.empty())
            throw std::invalid_argument("config error: bad override path '" + key_path + "'");
        if (dot == std::string::npos) {
            json parsed;
            try {
                parsed = json::parse(value);
            } catch (const json::parse_error&) {
                parsed = json(value);  // plain string
            }
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

json config_to_json(const Config& cfg) {
    json j;
    j["domain"] = {{"lo", cfg.lo}, {"hi", cfg.hi}, {"n", cfg.n}};
    j["s"] = cfg.s;
    j["p"] = cfg.p;
    j["reaction"] = reaction_to_json(cfg.reaction);
    j["solver"] = {{"tol", cfg.solver.tol},
                   {"max_iter", cfg.solver.max_iter},
                   {"starts", cfg.solver.starts},
                   {"k_max", cfg.solver.k_max},
                   {"stabilize_tol", cfg.solver.stabilize_tol},
                   {"zero_threshold", cfg.solver.zero_threshold},
                   {"boundary_fraction", cfg.solver.boundary_fraction},
                   {"uniqueness_tol", cfg.solver.uniqueness_tol}};
    j["eigen"] = {{"tol", cfg.eigen.tol},
                  {"max_iter", cfg.eigen.max_iter},
                  {"restarts", cfg.eigen.restarts}};
    j["seed"] = cfg.seed;
    json formats = json::array();
    if (cfg.out_json) formats.push_back("json");
    if (cfg.out_csv) formats.push_back("csv");
    if (cfg.out_svg) formats.push_back("svg");
    j["output"] = {{"dir", cfg.output_dir}, {"formats", formats}};
    return j;
}

} // namespace frap
