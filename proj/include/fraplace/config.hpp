#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraplace/reaction.hpp"
#include "fraplace/solver.hpp"
#include "fraplace/spectral.hpp"

namespace frap {

using json = nlohmann::json;

// Resolved run configuration. The JSON schema is strict: unknown keys are
// rejected with the offending path named.
struct Config {
    double lo = 0.0, hi = 1.0;
    int n = 64;
    double s = 0.5;
    double p = 2.0;
    Reaction reaction;
    SolverOptions solver;
    DescentOptions eigen;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    bool out_json = true, out_csv = true, out_svg = true;
};

// Parses and validates; numeric ranges are checked before any computation.
Config parse_config(const json& j);
Config load_config(const std::string& path);

// Applies a dotted-path override such as "solver.tol=1e-8" onto raw JSON.
void apply_override(json& j, const std::string& key_path, const std::string& value);

// Full resolved configuration, embedded in every output document.
json config_to_json(const Config& cfg);

json reaction_to_json(const Reaction& re);
Reaction reaction_from_json(const json& j, double p);

} // namespace frap
