#pragma once

#include "lcr/dataset.hpp"
#include "lcr/regression.hpp"
#include "lcr/rptree.hpp"
#include "lcr/wardclust.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lcr {

// Clustering variables used by default: change in income, lung cancer,
// COPD and black population.
std::vector<std::string> default_cluster_vars();

inline constexpr std::int64_t kDefaultExcludedRowId = 128;
inline constexpr const char* kDefaultExcludeReason = "outlier (5600_NYOR_NY)";
inline constexpr double kHistogramBinWidth = 0.02;

struct OutputFormats {
    bool json = true;
    bool csv = true;
    bool dot = true;

    bool operator==(const OutputFormats&) const = default;
};

struct LcrConfig {
    std::filesystem::path input;
    std::vector<std::int64_t> exclude_row_ids{kDefaultExcludedRowId};
    std::string exclude_reason = kDefaultExcludeReason;
    std::string response{var::kChangeLE};
    std::string exposure{var::kChangePM};
    // Empty optional selects variables by forward stepwise regression.
    std::optional<std::vector<std::string>> cluster_vars = default_cluster_vars();
    std::size_t k = 10;
    double alpha_enter = 0.05;
    std::size_t min_cluster_n_for_slr = 3;
    tree::TreeConfig tree;
    std::filesystem::path out_dir = "lcr_out";
    OutputFormats formats;

    // Throws ErrorKind::Config on inconsistent settings.
    void validate() const;
};

struct ClusterRegressionRow {
    std::size_t cluster = 0;
    std::size_t n = 0;
    std::optional<stat::SlrFit> fit;  // empty when the cluster is too small or exposure is constant
    std::optional<double> fdr_p_slope;
};

struct AugmentedRecord {
    LocationRecord record;
    std::size_t cluster = 0;
    std::optional<double> cluster_intercept;
    std::optional<double> cluster_slope;
};

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
};

struct NegativeShare {
    std::size_t count = 0;
    std::size_t n = 0;
    double proportion = 0.0;
};

struct ClusteringResult {
    StandardizedMatrix standardized;
    ward::Dendrogram dendrogram;
    ward::ClusterAssignment assignment;
};

struct Provenance {
    std::string tool_version;
    std::string dataset_hash;
    std::string rng_algorithm;
    std::string config_echo;  // compact JSON of the effective configuration
    std::size_t n_input = 0;
};

struct LcrReport {
    std::vector<std::string> variables;
    std::vector<ExcludedRow> excluded;
    SummaryStats summary;
    stat::SlrFit global;
    std::vector<std::string> cluster_vars;
    std::vector<std::string> tree_predictors;
    ward::Dendrogram dendrogram;
    std::vector<ClusterRegressionRow> clusters;
    std::vector<AugmentedRecord> augmented;
    std::vector<HistogramBin> slope_histogram;
    NegativeShare negative_share;
    tree::TreeFit intercept_tree;
    tree::TreeFit slope_tree;
    Provenance provenance;
    std::vector<std::string> warnings;
};

stat::SlrFit run_global_slr(const Dataset& d, const LcrConfig& cfg);

ClusteringResult cluster_locations(const Dataset& d, const std::vector<std::string>& vars, std::size_t k);

std::vector<ClusterRegressionRow> cluster_regressions(const Dataset& d, const ward::ClusterAssignment& a,
                                                      const LcrConfig& cfg);

NegativeShare negative_slope_share(const std::vector<ClusterRegressionRow>& table,
                                   const std::vector<std::size_t>& sizes);

// Location-weighted histogram of fitted cluster slopes, bins [i*w, (i+1)*w).
std::vector<HistogramBin> slope_histogram(const std::vector<ClusterRegressionRow>& table,
                                          double bin_width = kHistogramBinWidth);

// Runs the full workflow on an already loaded dataset (exclusions still applied).
LcrReport run_lcr(const Dataset& raw, const LcrConfig& cfg, const std::string& dataset_hash = "");
LcrReport run_lcr(const LcrConfig& cfg);

// FNV-1a 64-bit, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

std::string tool_version();

}  // namespace lcr
