#include "lcr/report_io.hpp"

#include "lcr/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lcr::io {

namespace {

Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round6(v);
}

Json opt_num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

double get_num(const Json& j, const char* key, double if_null = std::numeric_limits<double>::quiet_NaN()) {
    const auto& v = j.at(key);
    return v.is_null() ? if_null : v.get<double>();
}

std::optional<double> get_opt(const Json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

std::string csv_cell(const std::optional<double>& v) { return v ? format6(*v) : std::string(); }

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

Json node_to_json(const tree::TreeFit& t, std::size_t i) {
    const auto& node = t.nodes[i];
    Json j;
    j["n"] = node.n;
    j["mean"] = num(node.mean);
    j["depth"] = node.depth;
    if (node.split) {
        const auto& s = *node.split;
        j["variable"] = s.variable;
        j["variable_index"] = s.variable_index;
        j["cut"] = num(s.cut);
        j["n_left"] = s.n_left;
        j["n_right"] = s.n_right;
        j["ss_parent"] = num(s.ss_parent);
        j["ss_children"] = num(s.ss_children);
        j["f_stat"] = num(s.f_stat);
        j["p_raw"] = num(s.p_raw);
        j["m_cuts"] = s.m_cuts;
        j["p_adj"] = num(s.p_adj);
        j["logworth"] = num(s.logworth);
        j["left"] = node_to_json(t, node.left);
        j["right"] = node_to_json(t, node.right);
    }
    return j;
}

// Children are allocated as a pair before either subtree, matching grow().
void node_from_json(const Json& j, tree::TreeFit& t, std::size_t i) {
    t.nodes[i].n = j.at("n").get<std::size_t>();
    t.nodes[i].mean = get_num(j, "mean");
    t.nodes[i].depth = j.at("depth").get<std::size_t>();
    if (!j.contains("variable")) {
        ++t.n_leaves;
        return;
    }
    tree::SplitCandidate s;
    s.variable = j.at("variable").get<std::string>();
    s.variable_index = j.at("variable_index").get<std::size_t>();
    s.cut = get_num(j, "cut");
    s.n_left = j.at("n_left").get<std::size_t>();
    s.n_right = j.at("n_right").get<std::size_t>();
    s.ss_parent = get_num(j, "ss_parent");
    s.ss_children = get_num(j, "ss_children");
    s.f_stat = get_num(j, "f_stat", std::numeric_limits<double>::infinity());
    s.p_raw = get_num(j, "p_raw");
    s.m_cuts = j.at("m_cuts").get<std::size_t>();
    s.p_adj = get_num(j, "p_adj");
    s.logworth = get_num(j, "logworth");
    const std::size_t li = t.nodes.size();
    t.nodes.emplace_back();
    const std::size_t ri = t.nodes.size();
    t.nodes.emplace_back();
    t.nodes[i].split = std::move(s);
    t.nodes[i].left = li;
    t.nodes[i].right = ri;
    node_from_json(j.at("left"), t, li);
    node_from_json(j.at("right"), t, ri);
}

void dot_node(const tree::TreeFit& t, std::size_t i, std::ostream& out) {
    const auto& node = t.nodes[i];
    out << "  n" << i << " [label=\"n = " << node.n << "\\nmean = " << format6(node.mean);
    if (node.split) {
        out << "\\n" << node.split->variable << "\\nLogWorth = " << format6(node.split->logworth);
    }
    out << "\"];\n";
    if (!node.split) return;
    const std::string cut = format6(node.split->cut);
    out << "  n" << i << " -> n" << node.left << " [label=\"< " << cut << "\"];\n";
    out << "  n" << i << " -> n" << node.right << " [label=\"\xE2\x89\xA5 " << cut << "\"];\n";
    dot_node(t, node.left, out);
    dot_node(t, node.right, out);
}

void write_file(const std::filesystem::path& path, const std::string& contents,
                std::vector<std::filesystem::path>& written) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << contents;
    out.close();
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
    written.push_back(path);
}

}  // namespace

double round6(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    return std::strtod(format6(v).c_str(), nullptr);
}

std::string format6(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Json to_json(const stat::SlrFit& fit) {
    Json j;
    j["n"] = fit.n;
    j["df"] = fit.df;
    j["intercept"] = num(fit.intercept);
    j["se_intercept"] = num(fit.se_intercept);
    j["t_intercept"] = opt_num(fit.t_intercept);
    j["p_intercept"] = opt_num(fit.p_intercept);
    j["slope"] = num(fit.slope);
    j["se_slope"] = num(fit.se_slope);
    j["t_slope"] = opt_num(fit.t_slope);
    j["p_slope"] = opt_num(fit.p_slope);
    j["r2"] = num(fit.r2);
    j["rss"] = num(fit.rss);
    j["perfect_fit"] = fit.perfect_fit;
    return j;
}

stat::SlrFit slr_from_json(const Json& j) {
    stat::SlrFit f;
    f.n = j.at("n").get<std::size_t>();
    f.df = j.at("df").get<std::size_t>();
    f.intercept = get_num(j, "intercept");
    f.se_intercept = get_num(j, "se_intercept");
    f.t_intercept = get_opt(j, "t_intercept");
    f.p_intercept = get_opt(j, "p_intercept");
    f.slope = get_num(j, "slope");
    f.se_slope = get_num(j, "se_slope");
    f.t_slope = get_opt(j, "t_slope");
    f.p_slope = get_opt(j, "p_slope");
    f.r2 = get_num(j, "r2");
    f.rss = get_num(j, "rss");
    f.perfect_fit = j.at("perfect_fit").get<bool>();
    return f;
}

Json to_json(const tree::TreeFit& tree) {
    Json j;
    j["r2"] = num(tree.r2);
    j["n_leaves"] = tree.n_leaves;
    j["root"] = tree.nodes.empty() ? Json(nullptr) : node_to_json(tree, 0);
    return j;
}

tree::TreeFit tree_from_json(const Json& j) {
    tree::TreeFit t;
    t.r2 = get_num(j, "r2");
    if (!j.at("root").is_null()) {
        t.nodes.emplace_back();
        node_from_json(j.at("root"), t, 0);
    }
    if (t.n_leaves != j.at("n_leaves").get<std::size_t>()) {
        throw Error(ErrorKind::Parse, "tree JSON: leaf count does not match its nodes");
    }
    return t;
}

std::string to_dot(const tree::TreeFit& tree, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << name << " {\n  node [shape=box];\n";
    if (!tree.nodes.empty()) dot_node(tree, 0, out);
    out << "}\n";
    return out.str();
}

Json to_json(const ward::Dendrogram& dend) {
    Json j;
    j["n"] = dend.n;
    j["merges"] = Json::array();
    for (const auto& m : dend.merges) {
        j["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", num(m.height)}, {"size", m.size}});
    }
    return j;
}

ward::Dendrogram dendrogram_from_json(const Json& j) {
    ward::Dendrogram d;
    d.n = j.at("n").get<std::size_t>();
    for (const auto& m : j.at("merges")) {
        d.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                            get_num(m, "height"), m.at("size").get<std::size_t>()});
    }
    return d;
}

Json to_json(const LcrReport& r) {
    Json j;
    j["provenance"] = {{"tool_version", r.provenance.tool_version},
                       {"dataset_hash", r.provenance.dataset_hash},
                       {"rng_algorithm", r.provenance.rng_algorithm},
                       {"config", r.provenance.config_echo},
                       {"n_input", r.provenance.n_input}};
    j["variables"] = r.variables;
    j["excluded"] = Json::array();
    for (const auto& e : r.excluded) j["excluded"].push_back({{"row_id", e.row_id}, {"reason", e.reason}});
    j["warnings"] = r.warnings;
    j["summary"] = Json::array();
    for (const auto& s : r.summary.variables) {
        j["summary"].push_back({{"variable", s.name}, {"mean", num(s.mean)}, {"sd", num(s.sd)}, {"n", s.n}});
    }
    j["global_regression"] = to_json(r.global);
    j["cluster_vars"] = r.cluster_vars;
    j["tree_predictors"] = r.tree_predictors;
    j["dendrogram"] = to_json(r.dendrogram);
    j["clusters"] = Json::array();
    for (const auto& c : r.clusters) {
        j["clusters"].push_back({{"cluster", c.cluster},
                                 {"n", c.n},
                                 {"fit", c.fit ? to_json(*c.fit) : Json(nullptr)},
                                 {"fdr_p_slope", opt_num(c.fdr_p_slope)}});
    }
    j["augmented"] = Json::array();
    for (const auto& a : r.augmented) {
        Json values = Json::array();
        for (double v : a.record.values) values.push_back(num(v));
        j["augmented"].push_back({{"row_id", a.record.row_id},
                                  {"label", a.record.label},
                                  {"values", values},
                                  {"cluster", a.cluster},
                                  {"cluster_intercept", opt_num(a.cluster_intercept)},
                                  {"cluster_slope", opt_num(a.cluster_slope)}});
    }
    j["slope_histogram"] = Json::array();
    for (const auto& b : r.slope_histogram) {
        j["slope_histogram"].push_back({{"low", num(b.low)}, {"high", num(b.high)}, {"count", b.count}});
    }
    j["negative_share"] = {{"count", r.negative_share.count},
                           {"n", r.negative_share.n},
                           {"proportion", num(r.negative_share.proportion)}};
    j["intercept_tree"] = to_json(r.intercept_tree);
    j["slope_tree"] = to_json(r.slope_tree);
    return j;
}

LcrReport report_from_json(const Json& j) {
    LcrReport r;
    const auto& p = j.at("provenance");
    r.provenance.tool_version = p.at("tool_version").get<std::string>();
    r.provenance.dataset_hash = p.at("dataset_hash").get<std::string>();
    r.provenance.rng_algorithm = p.at("rng_algorithm").get<std::string>();
    r.provenance.config_echo = p.at("config").get<std::string>();
    r.provenance.n_input = p.at("n_input").get<std::size_t>();
    r.variables = j.at("variables").get<std::vector<std::string>>();
    for (const auto& e : j.at("excluded")) {
        r.excluded.push_back({e.at("row_id").get<std::int64_t>(), e.at("reason").get<std::string>()});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& s : j.at("summary")) {
        r.summary.variables.push_back(
            {s.at("variable").get<std::string>(), get_num(s, "mean"), get_num(s, "sd"), s.at("n").get<std::size_t>()});
    }
    r.global = slr_from_json(j.at("global_regression"));
    r.cluster_vars = j.at("cluster_vars").get<std::vector<std::string>>();
    r.tree_predictors = j.at("tree_predictors").get<std::vector<std::string>>();
    r.dendrogram = dendrogram_from_json(j.at("dendrogram"));
    for (const auto& c : j.at("clusters")) {
        ClusterRegressionRow row;
        row.cluster = c.at("cluster").get<std::size_t>();
        row.n = c.at("n").get<std::size_t>();
        if (!c.at("fit").is_null()) row.fit = slr_from_json(c.at("fit"));
        row.fdr_p_slope = get_opt(c, "fdr_p_slope");
        r.clusters.push_back(std::move(row));
    }
    for (const auto& a : j.at("augmented")) {
        AugmentedRecord rec;
        rec.record.row_id = a.at("row_id").get<std::int64_t>();
        rec.record.label = a.at("label").get<std::string>();
        for (const auto& v : a.at("values")) rec.record.values.push_back(v.get<double>());
        rec.cluster = a.at("cluster").get<std::size_t>();
        rec.cluster_intercept = get_opt(a, "cluster_intercept");
        rec.cluster_slope = get_opt(a, "cluster_slope");
        r.augmented.push_back(std::move(rec));
    }
    for (const auto& b : j.at("slope_histogram")) {
        r.slope_histogram.push_back({get_num(b, "low"), get_num(b, "high"), b.at("count").get<std::size_t>()});
    }
    const auto& ns = j.at("negative_share");
    r.negative_share = {ns.at("count").get<std::size_t>(), ns.at("n").get<std::size_t>(), get_num(ns, "proportion")};
    r.intercept_tree = tree_from_json(j.at("intercept_tree"));
    r.slope_tree = tree_from_json(j.at("slope_tree"));
    return r;
}

void write_cluster_table_csv(const LcrReport& r, std::ostream& out) {
    out << "Cluster,N,Intercept,SE Inter,t Inter,P Val Int,Slope,SE Slope,t Slope,P val Slope,FDR P val\n";
    for (const auto& c : r.clusters) {
        out << c.cluster << ',' << c.n;
        if (c.fit) {
            const auto& f = *c.fit;
            out << ',' << format6(f.intercept) << ',' << format6(f.se_intercept) << ',' << csv_cell(f.t_intercept)
                << ',' << csv_cell(f.p_intercept) << ',' << format6(f.slope) << ',' << format6(f.se_slope) << ','
                << csv_cell(f.t_slope) << ',' << csv_cell(f.p_slope);
        } else {
            out << ",,,,,,,,";
        }
        out << ',' << csv_cell(c.fdr_p_slope) << '\n';
    }
}

void write_augmented_csv(const LcrReport& r, std::ostream& out) {
    out << "RowID,Label";
    for (const auto& v : r.variables) out << ',' << quote(v);
    out << ",Cluster,ClusterIntercept,ClusterSlope\n";
    for (const auto& a : r.augmented) {
        out << a.record.row_id << ',' << quote(a.record.label);
        for (double v : a.record.values) out << ',' << format6(v);
        out << ',' << a.cluster << ',' << csv_cell(a.cluster_intercept) << ',' << csv_cell(a.cluster_slope) << '\n';
    }
}

void write_histogram_csv(const LcrReport& r, std::ostream& out) {
    out << "bin,count\n";
    for (const auto& b : r.slope_histogram) out << format6(b.low) << ',' << b.count << '\n';
}

void write_assignment_csv(const LcrReport& r, std::ostream& out) {
    out << "row_id,cluster\n";
    for (const auto& a : r.augmented) out << a.record.row_id << ',' << a.cluster << '\n';
}

std::vector<std::filesystem::path> emit_report(const LcrReport& report, const std::filesystem::path& dir,
                                               const OutputFormats& formats) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());

    std::vector<std::filesystem::path> written;
    auto render = [](auto&& writer) {
        std::ostringstream s;
        writer(s);
        return s.str();
    };
    if (formats.json) {
        write_file(dir / "report.json", to_json(report).dump(2) + "\n", written);
        write_file(dir / "intercept_tree.json", to_json(report.intercept_tree).dump(2) + "\n", written);
        write_file(dir / "slope_tree.json", to_json(report.slope_tree).dump(2) + "\n", written);
        write_file(dir / "dendrogram.json", to_json(report.dendrogram).dump(2) + "\n", written);
    }
    if (formats.csv) {
        write_file(dir / "cluster_table.csv", render([&](std::ostream& o) { write_cluster_table_csv(report, o); }),
                   written);
        write_file(dir / "augmented.csv", render([&](std::ostream& o) { write_augmented_csv(report, o); }), written);
        write_file(dir / "slope_hist.csv", render([&](std::ostream& o) { write_histogram_csv(report, o); }), written);
        write_file(dir / "assignment.csv", render([&](std::ostream& o) { write_assignment_csv(report, o); }),
                   written);
    }
    if (formats.dot) {
        write_file(dir / "intercept_tree.dot", to_dot(report.intercept_tree, "intercept_tree"), written);
        write_file(dir / "slope_tree.dot", to_dot(report.slope_tree, "slope_tree"), written);
    }
    return written;
}

}  // namespace lcr::io
