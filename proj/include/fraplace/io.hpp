#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraplace/config.hpp"
#include "fraplace/solver.hpp"
#include "fraplace/spectral.hpp"
#include "fraplace/verify.hpp"

namespace frap {

json extended_real_to_json(const ExtendedReal& x);
json eigen_result_to_json(const EigenResult& res);
json solve_result_to_json(const SolveResult& res);
json criterion_verdict_to_json(const CriterionVerdict& verdict);
json property_report_to_json(const PropertyReport& rep);
json uniqueness_report_to_json(const UniquenessReport& rep);

// Directory the run writes into: output.dir itself with overwrite, otherwise
// a fresh run-<timestamp> subdirectory.
std::filesystem::path resolve_output_dir(const std::string& base, bool overwrite);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& doc);

// CSV with a header row; floats printed with 17 significant digits so values
// round-trip exactly.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

struct SvgSeries {
    std::string name;
    std::vector<double> x, y;
};

// Self-contained line plot: one polyline per series, axis labels, no
// external renderer needed.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series);

} // namespace frap
