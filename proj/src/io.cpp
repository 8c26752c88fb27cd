#include "fraplace/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace frap {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

} // namespace

json extended_real_to_json(const ExtendedReal& x) {
    if (x.is_plus_inf()) return json("+inf");
    if (x.is_minus_inf()) return json("-inf");
    return json(x.value());
}

json eigen_result_to_json(const EigenResult& res) {
    json j;
    j["lambda"] = extended_real_to_json(res.lambda);
    j["residual"] = res.residual;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["n"] = res.v.size();
    return j;
}

json solve_result_to_json(const SolveResult& res) {
    double sup_u = 0.0;
    for (double v : res.u) sup_u = std::max(sup_u, std::fabs(v));
    json j;
    j["phi"] = res.phi;
    j["residual"] = res.residual;
    j["k_final"] = res.k_final;
    j["iterations"] = res.iterations;
    j["min_u"] = res.min_u;
    j["min_u_precleanup"] = res.min_u_precleanup;
    j["sup_u"] = sup_u;
    j["boundary_ratio_lo"] = res.boundary_ratio_lo;
    j["boundary_ratio_hi"] = res.boundary_ratio_hi;
    j["converged"] = res.converged;
    j["classification"] = res.classification;
    j["invariant_violations"] = res.invariant_violations;
    return j;
}

json criterion_verdict_to_json(const CriterionVerdict& verdict) {
    json j;
    j["lambda_a0"] = extended_real_to_json(verdict.lambda_a0);
    j["lambda_ainf"] = extended_real_to_json(verdict.lambda_ainf);
    j["solvable"] = verdict.solvable;
    j["hypotheses_ok"] = verdict.hypotheses_ok;
    j["experimental"] = verdict.experimental;
    j["reason"] = verdict.reason;
    return j;
}

json property_report_to_json(const PropertyReport& rep) {
    json j;
    j["property"] = rep.property;
    j["trials"] = rep.trials;
    j["violations"] = rep.violations;
    j["worst_margin"] = rep.worst_margin == kInf ? json("none") : json(rep.worst_margin);
    j["failures"] = rep.failure_samples;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

json uniqueness_report_to_json(const UniquenessReport& rep) {
    json j;
    j["starts"] = rep.starts;
    j["max_pairwise_dist"] = rep.max_pairwise_dist;
    j["verdict"] = rep.verdict;
    j["failures"] = rep.failures;
    j["sup_norms"] = rep.sup_norms;
    return j;
}

std::filesystem::path resolve_output_dir(const std::string& base, bool overwrite) {
    namespace fs = std::filesystem;
    fs::path root(base);
    if (overwrite) {
        fs::create_directories(root);
        return root;
    }
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "run-%Y%m%d-%H%M%S", std::localtime(&tt));
    fs::path dir = root / stamp;
    int suffix = 1;
    while (fs::exists(dir)) dir = root / (std::string(stamp) + "-" + std::to_string(++suffix));
    fs::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    std::string text;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) text += ",";
        text += header[c];
    }
    text += "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) text += ",";
            text += fmt17(columns[c][r]);
        }
        text += "\n";
    }
    write_text(path, text);
}

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series) {
    const int width = 800, height = 500;
    const int ml = 70, mr = 20, mt = 40, mb = 50;

    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const auto& s : series) {
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }

    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";
    // axes
    svg += "<line x1=\"" + fmt6(px(xmin)) + "\" y1=\"" + fmt6(py(ymin)) + "\" x2=\"" +
           fmt6(px(xmax)) + "\" y2=\"" + fmt6(py(ymin)) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt6(px(xmin)) + "\" y1=\"" + fmt6(py(ymin)) + "\" x2=\"" +
           fmt6(px(xmin)) + "\" y2=\"" + fmt6(py(ymax)) + "\" stroke=\"black\"/>\n";
    // tick labels at the extremes
    svg += "<text x=\"" + fmt6(px(xmin)) + "\" y=\"" + std::to_string(height - mb + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt6(xmin) + "</text>\n";
    svg += "<text x=\"" + fmt6(px(xmax)) + "\" y=\"" + std::to_string(height - mb + 18) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt6(xmax) +
           "</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + fmt6(py(ymin)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt6(ymin) +
           "</text>\n";
    svg += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + fmt6(py(ymax)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt6(ymax) +
           "</text>\n";
    // axis labels
    svg += "<text x=\"" + std::to_string((ml + width - mr) / 2) + "\" y=\"" +
           std::to_string(height - 12) + "\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"13\">" + xlabel + "</text>\n";
    svg += "<text x=\"16\" y=\"" + std::to_string((mt + height - mb) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " + std::to_string((mt + height - mb) / 2) + ")\">" +
           ylabel + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % 5];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) pts += " ";
            pts += fmt6(px(s.x[i])) + "," + fmt6(py(s.y[i]));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + std::to_string(width - mr - 6) + "\" y=\"" +
               std::to_string(mt + 16 * (static_cast<int>(k) + 1)) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               color + "\">" + s.name + "</text>\n";
    }
    svg += "</svg>\n";
    write_text(path, svg);
}

} // namespace frap
