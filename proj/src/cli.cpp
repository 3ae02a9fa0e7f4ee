#include "lcr/cli.hpp"

#include "lcr/error.hpp"
#include "lcr/pipeline.hpp"
#include "lcr/report_io.hpp"
#include "lcr/synthkit.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace lcr {

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(' ');
        const auto last = item.find_last_not_of(' ');
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

OutputFormats parse_formats(const std::string& s) {
    OutputFormats f{false, false, false};
    for (const auto& item : split_list(s)) {
        if (item == "json") {
            f.json = true;
        } else if (item == "csv") {
            f.csv = true;
        } else if (item == "dot") {
            f.dot = true;
        } else {
            throw Error(ErrorKind::Config, "unknown output format '" + item + "'");
        }
    }
    if (!f.json && !f.csv && !f.dot) throw Error(ErrorKind::Config, "no output format selected");
    return f;
}

std::string cell(const std::optional<double>& v, const char* fmt) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, *v);
    return buf;
}

void print_cluster_table(const LcrReport& r, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof line, "%7s %4s %9s %8s %8s %8s %9s %8s %7s %8s %8s\n", "Cluster", "N", "Intercept",
                  "SE Int", "t Int", "P Int", "Slope", "SE Slope", "t Slope", "P Slope", "FDR P");
    out << line;
    for (const auto& c : r.clusters) {
        if (!c.fit) {
            std::snprintf(line, sizeof line, "%7zu %4zu   (no regression)\n", c.cluster, c.n);
            out << line;
            continue;
        }
        const auto& f = *c.fit;
        std::snprintf(line, sizeof line, "%7zu %4zu %9.4f %8.4f %8s %8s %9.4f %8.4f %7s %8s %8s\n", c.cluster, c.n,
                      f.intercept, f.se_intercept, cell(f.t_intercept, "%.4f").c_str(),
                      cell(f.p_intercept, "%.4f").c_str(), f.slope, f.se_slope, cell(f.t_slope, "%.2f").c_str(),
                      cell(f.p_slope, "%.4f").c_str(), cell(c.fdr_p_slope, "%.4f").c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "Negative-slope locations: %zu of %zu (%.1f%%)\n", r.negative_share.count,
                  r.negative_share.n, 100.0 * r.negative_share.proportion);
    out << line;
    std::snprintf(line, sizeof line, "Intercept tree R2: %.4f (%zu leaves)\nSlope tree R2: %.4f (%zu leaves)\n",
                  r.intercept_tree.r2, r.intercept_tree.n_leaves, r.slope_tree.r2, r.slope_tree.n_leaves);
    out << line;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local Control Regression: cluster on confounders, regress within clusters, "
                 "explain local intercepts and slopes with regression trees"};
    app.set_version_flag("--version", tool_version());
    app.failure_message(CLI::FailureMessage::help);

    std::string input;
    std::size_t k = 10;
    std::string cluster_vars;
    std::string exclude = std::to_string(kDefaultExcludedRowId);
    std::string response{var::kChangeLE};
    std::string exposure{var::kChangePM};
    double alpha_enter = 0.05;
    double logworth_min = 3.0;
    std::size_t min_leaf = 5;
    std::size_t max_depth = 6;
    std::string out_dir = "lcr_out";
    std::string formats = "json,csv,dot";

    app.add_option("--input", input, "Input CSV");
    app.add_option("--k", k, "Number of clusters")->capture_default_str();
    app.add_option("--cluster-vars", cluster_vars, "Comma-separated clustering variables, or 'auto' for stepwise");
    app.add_option("--exclude", exclude, "Comma-separated RowIDs to drop (empty string for none)")
        ->capture_default_str();
    app.add_option("--response", response, "Response variable")->capture_default_str();
    app.add_option("--exposure", exposure, "Exposure variable")->capture_default_str();
    app.add_option("--alpha-enter", alpha_enter, "Stepwise entry threshold")->capture_default_str();
    app.add_option("--logworth-min", logworth_min, "Minimum LogWorth for a tree split")->capture_default_str();
    app.add_option("--min-leaf", min_leaf, "Minimum tree leaf size")->capture_default_str();
    app.add_option("--max-depth", max_depth, "Maximum tree depth")->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", formats, "Output formats (json,csv,dot)")->capture_default_str();

    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset with planted clusters");
    std::size_t synth_k = 10;
    std::size_t synth_n = 21;
    double synth_noise = 0.5;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    synth_cmd->add_option("--k", synth_k, "Number of clusters")->capture_default_str();
    synth_cmd->add_option("--n", synth_n, "Locations per cluster")->capture_default_str();
    synth_cmd->add_option("--noise", synth_noise, "Response noise standard deviation")->capture_default_str();
    synth_cmd->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth_cmd->parsed()) {
            const auto sd = synth::generate(synth::default_config(synth_k, synth_n, synth_noise, synth_seed));
            std::ofstream file(synth_out, std::ios::binary | std::ios::trunc);
            if (!file) throw Error(ErrorKind::Io, "cannot write '" + synth_out + "'");
            ExtraColumn truth{"TrueCluster", {}};
            for (auto label : sd.true_labels) truth.cells.push_back(std::to_string(label));
            write_csv(sd.data, file, {truth});
            out << "wrote " << sd.data.size() << " synthetic records to " << synth_out << '\n';
            return kExitOk;
        }

        if (input.empty()) {
            err << "error: --input is required\n\n" << app.help();
            return kExitUsage;
        }
        LcrConfig cfg;
        cfg.input = input;
        cfg.k = k;
        cfg.response = response;
        cfg.exposure = exposure;
        cfg.alpha_enter = alpha_enter;
        cfg.tree.logworth_min = logworth_min;
        cfg.tree.min_leaf = min_leaf;
        cfg.tree.max_depth = max_depth;
        cfg.out_dir = out_dir;
        cfg.formats = parse_formats(formats);
        if (cluster_vars == "auto") {
            cfg.cluster_vars.reset();
        } else if (!cluster_vars.empty()) {
            cfg.cluster_vars = split_list(cluster_vars);
        }
        cfg.exclude_row_ids.clear();
        for (const auto& id : split_list(exclude)) {
            try {
                std::size_t used = 0;
                cfg.exclude_row_ids.push_back(std::stoll(id, &used));
                if (used != id.size()) throw std::invalid_argument(id);
            } catch (const std::exception&) {
                throw Error(ErrorKind::Config, "--exclude: invalid RowID '" + id + "'");
            }
        }
        cfg.validate();

        const auto report = run_lcr(cfg);
        for (const auto& w : report.warnings) err << "warning: " << w << '\n';
        io::emit_report(report, cfg.out_dir, cfg.formats);
        print_cluster_table(report, out);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Config ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace lcr
