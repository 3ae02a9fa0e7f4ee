#include "lcr/pipeline.hpp"

#include "lcr/error.hpp"
#include "lcr/fdr.hpp"
#include "lcr/stepwise.hpp"
#include "lcr/synthkit.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

namespace lcr {

namespace {

// Runs `fn`, re-throwing library errors with the stage name prefixed.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("stage '") + name + "': " + e.what());
    }
}

std::vector<std::string> non_target_variables(const Dataset& d, const LcrConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& v : d.variables) {
        if (v != cfg.response && v != cfg.exposure) out.push_back(v);
    }
    return out;
}

std::string config_echo(const LcrConfig& cfg) {
    nlohmann::ordered_json j;
    j["input"] = cfg.input.generic_string();
    j["exclude_row_ids"] = cfg.exclude_row_ids;
    j["exclude_reason"] = cfg.exclude_reason;
    j["response"] = cfg.response;
    j["exposure"] = cfg.exposure;
    if (cfg.cluster_vars) {
        j["cluster_vars"] = *cfg.cluster_vars;
    } else {
        j["cluster_vars"] = "auto";
    }
    j["k"] = cfg.k;
    j["alpha_enter"] = cfg.alpha_enter;
    j["min_cluster_n_for_slr"] = cfg.min_cluster_n_for_slr;
    j["logworth_min"] = cfg.tree.logworth_min;
    j["min_leaf"] = cfg.tree.min_leaf;
    j["max_depth"] = cfg.tree.max_depth;
    return j.dump();
}

tree::TreeData tree_data(const std::vector<AugmentedRecord>& rows, const Dataset& d,
                         const std::vector<std::string>& predictors, bool slope_target) {
    std::vector<std::size_t> cols;
    for (const auto& p : predictors) cols.push_back(d.index_of(p));
    tree::TreeData td;
    td.predictors = predictors;
    std::vector<const AugmentedRecord*> fitted;
    for (const auto& r : rows) {
        if (r.cluster_slope) fitted.push_back(&r);
    }
    td.X = Matrix(fitted.size(), cols.size());
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) td.X(i, c) = fitted[i]->record.values[cols[c]];
        td.y.push_back(slope_target ? *fitted[i]->cluster_slope : *fitted[i]->cluster_intercept);
    }
    return td;
}

}  // namespace

std::vector<std::string> default_cluster_vars() {
    return {std::string(var::kChangeIncome), std::string(var::kLcan), std::string(var::kCopd),
            std::string(var::kBlack)};
}

std::string tool_version() { return LCR_VERSION; }

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void LcrConfig::validate() const {
    if (response == exposure) throw Error(ErrorKind::Config, "response and exposure must differ");
    if (cluster_vars) {
        if (cluster_vars->empty()) throw Error(ErrorKind::Config, "cluster variable list is empty");
        for (const auto& v : *cluster_vars) {
            if (v == response || v == exposure) {
                throw Error(ErrorKind::Config,
                            "cluster variables must not include the response or exposure ('" + v + "')");
            }
        }
    }
    if (k < 1) throw Error(ErrorKind::Config, "k must be >= 1");
    if (!(alpha_enter > 0.0 && alpha_enter <= 1.0)) throw Error(ErrorKind::Config, "alpha_enter must be in (0, 1]");
    if (min_cluster_n_for_slr < 3) throw Error(ErrorKind::Config, "min_cluster_n_for_slr must be >= 3");
    tree.validate();
}

stat::SlrFit run_global_slr(const Dataset& d, const LcrConfig& cfg) {
    if (d.size() == 0) throw Error(ErrorKind::InsufficientData, "dataset is empty");
    const auto x = d.column(cfg.exposure);
    const auto y = d.column(cfg.response);
    return stat::slr_fit(x, y);
}

ClusteringResult cluster_locations(const Dataset& d, const std::vector<std::string>& vars, std::size_t k) {
    if (k > d.size()) {
        throw Error(ErrorKind::Domain, "k = " + std::to_string(k) + " exceeds the number of records (" +
                                           std::to_string(d.size()) + ")");
    }
    ClusteringResult out;
    out.standardized = standardize(d, vars);
    out.dendrogram = ward::ward_cluster(ward::squared_euclidean(out.standardized));
    out.assignment = ward::cut_k(out.dendrogram, k);
    return out;
}

std::vector<ClusterRegressionRow> cluster_regressions(const Dataset& d, const ward::ClusterAssignment& a,
                                                      const LcrConfig& cfg) {
    const auto x = d.column(cfg.exposure);
    const auto y = d.column(cfg.response);
    std::vector<std::vector<double>> xs(a.k);
    std::vector<std::vector<double>> ys(a.k);
    for (std::size_t i = 0; i < d.size(); ++i) {
        xs[a.labels[i] - 1].push_back(x[i]);
        ys[a.labels[i] - 1].push_back(y[i]);
    }
    std::vector<ClusterRegressionRow> rows(a.k);
    std::vector<double> pvals;
    std::vector<std::size_t> tested;
    for (std::size_t c = 0; c < a.k; ++c) {
        rows[c].cluster = c + 1;
        rows[c].n = xs[c].size();
        if (rows[c].n < cfg.min_cluster_n_for_slr) continue;
        const auto [lo, hi] = std::minmax_element(xs[c].begin(), xs[c].end());
        if (*lo == *hi) continue;
        rows[c].fit = stat::slr_fit(xs[c], ys[c]);
        if (rows[c].fit->p_slope) {
            pvals.push_back(*rows[c].fit->p_slope);
            tested.push_back(c);
        }
    }
    const auto adj = stat::bh_adjust(pvals);
    for (std::size_t i = 0; i < tested.size(); ++i) rows[tested[i]].fdr_p_slope = adj.adjusted[i];
    return rows;
}

NegativeShare negative_slope_share(const std::vector<ClusterRegressionRow>& table,
                                   const std::vector<std::size_t>& sizes) {
    if (table.size() != sizes.size()) {
        throw Error(ErrorKind::Domain, "negative_slope_share: " + std::to_string(table.size()) +
                                           " rows but " + std::to_string(sizes.size()) + " sizes");
    }
    NegativeShare s;
    for (std::size_t i = 0; i < table.size(); ++i) {
        s.n += sizes[i];
        if (table[i].fit && table[i].fit->slope < 0.0) s.count += sizes[i];
    }
    s.proportion = s.n > 0 ? static_cast<double>(s.count) / static_cast<double>(s.n) : 0.0;
    return s;
}

std::vector<HistogramBin> slope_histogram(const std::vector<ClusterRegressionRow>& table, double bin_width) {
    std::map<long long, std::size_t> counts;
    for (const auto& row : table) {
        if (!row.fit) continue;
        counts[static_cast<long long>(std::floor(row.fit->slope / bin_width))] += row.n;
    }
    std::vector<HistogramBin> bins;
    if (counts.empty()) return bins;
    for (long long b = counts.begin()->first; b <= counts.rbegin()->first; ++b) {
        const auto it = counts.find(b);
        bins.push_back({static_cast<double>(b) * bin_width, static_cast<double>(b + 1) * bin_width,
                        it == counts.end() ? 0 : it->second});
    }
    return bins;
}

LcrReport run_lcr(const Dataset& raw, const LcrConfig& cfg, const std::string& dataset_hash) {
    cfg.validate();
    LcrReport report;
    report.provenance.tool_version = tool_version();
    report.provenance.dataset_hash = dataset_hash;
    report.provenance.rng_algorithm = std::string(synth::kRngAlgorithm);
    report.provenance.config_echo = config_echo(cfg);
    report.provenance.n_input = raw.size();

    const Dataset d = stage("exclude", [&] {
        raw.validate();
        (void)raw.index_of(cfg.response);
        (void)raw.index_of(cfg.exposure);
        return exclude_rows(raw, cfg.exclude_row_ids, cfg.exclude_reason);
    });
    report.variables = d.variables;
    report.excluded = d.excluded;
    report.warnings = d.warnings;

    report.summary = stage("summary", [&] { return summary_stats(d); });
    report.global = stage("global-regression", [&] { return run_global_slr(d, cfg); });

    report.cluster_vars = stage("select-covariates", [&] {
        if (cfg.cluster_vars) {
            for (const auto& v : *cfg.cluster_vars) (void)d.index_of(v);
            return *cfg.cluster_vars;
        }
        auto sel = stat::stepwise_forward(d, cfg.response, non_target_variables(d, cfg), cfg.alpha_enter);
        report.warnings.insert(report.warnings.end(), sel.warnings.begin(), sel.warnings.end());
        if (sel.selected.empty()) {
            throw Error(ErrorKind::InsufficientData, "stepwise selection chose no clustering variables");
        }
        return sel.selected;
    });

    const auto clustering = stage("cluster", [&] { return cluster_locations(d, report.cluster_vars, cfg.k); });
    report.dendrogram = clustering.dendrogram;
    const auto& assignment = clustering.assignment;

    report.clusters = stage("cluster-regression", [&] { return cluster_regressions(d, assignment, cfg); });
    for (const auto& row : report.clusters) {
        if (!row.fit) {
            report.warnings.push_back("cluster " + std::to_string(row.cluster) + " (n = " +
                                      std::to_string(row.n) + ") has no regression");
        }
    }

    report.augmented.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        AugmentedRecord a;
        a.record = d.records[i];
        a.cluster = assignment.labels[i];
        if (const auto& fit = report.clusters[a.cluster - 1].fit) {
            a.cluster_intercept = fit->intercept;
            a.cluster_slope = fit->slope;
        }
        report.augmented.push_back(std::move(a));
    }
    report.slope_histogram = slope_histogram(report.clusters);
    report.negative_share = negative_slope_share(report.clusters, assignment.sizes);

    report.tree_predictors = non_target_variables(d, cfg);
    stage("trees", [&] {
        const auto intercept_data = tree_data(report.augmented, d, report.tree_predictors, false);
        if (intercept_data.size() == 0) {
            throw Error(ErrorKind::InsufficientData, "no cluster produced a regression to explain");
        }
        report.intercept_tree = tree::grow(intercept_data, cfg.tree);
        report.slope_tree = tree::grow(tree_data(report.augmented, d, report.tree_predictors, true), cfg.tree);
    });
    return report;
}

LcrReport run_lcr(const LcrConfig& cfg) {
    cfg.validate();
    std::string bytes;
    {
        std::ifstream in(cfg.input, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, "stage 'ingest': cannot open '" + cfg.input.string() + "'");
        bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    std::istringstream stream(bytes);
    const Dataset raw = stage("ingest", [&] { return parse_csv(stream); });
    return run_lcr(raw, cfg, fnv1a_hex(bytes));
}

}  // namespace lcr
