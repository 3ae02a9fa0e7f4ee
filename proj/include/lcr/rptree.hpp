#pragma once

#include "lcr/matrix.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcr::tree {

// LogWorth reported for splits whose adjusted p-value underflows.
inline constexpr double kLogWorthCap = 300.0;

// Predictor columns plus a continuous response, one row per observation.
struct TreeData {
    std::vector<std::string> predictors;
    Matrix X;
    std::vector<double> y;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t predictor_index(const std::string& name) const;
};

// Rule: a row goes left iff value < cut.
struct SplitCandidate {
    std::string variable;
    std::size_t variable_index = 0;
    double cut = 0.0;
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    double ss_parent = 0.0;
    double ss_children = 0.0;
    double f_stat = 0.0;
    double p_raw = 1.0;
    std::size_t m_cuts = 0;  // Bonferroni multiplier
    double p_adj = 1.0;
    double logworth = 0.0;
};

struct TreeConfig {
    double logworth_min = 3.0;
    std::size_t min_leaf = 5;
    std::size_t max_depth = 6;

    void validate() const;
};

struct TreeNode {
    std::size_t n = 0;
    double mean = 0.0;
    std::size_t depth = 0;
    std::optional<SplitCandidate> split;
    // Indices into TreeFit::nodes; meaningful only when `split` is set.
    std::size_t left = 0;
    std::size_t right = 0;

    bool is_leaf() const noexcept { return !split.has_value(); }
};

struct TreeFit {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double r2 = 0.0;
    std::size_t n_leaves = 0;

    const TreeNode& root() const { return nodes.front(); }
};

// Midpoints between consecutive distinct sorted values.
std::vector<double> candidate_cuts(std::span<const double> values);

SplitCandidate evaluate_split(const TreeData& data, std::span<const std::size_t> rows,
                              const std::string& variable, double cut);

// Highest-LogWorth split honoring min_leaf, or nothing when no candidate
// clears logworth_min. Ties keep the earlier predictor, then the smaller cut.
std::optional<SplitCandidate> best_split(const TreeData& data, std::span<const std::size_t> rows,
                                         const TreeConfig& config);

TreeFit grow(const TreeData& data, const TreeConfig& config);

double predict(const TreeFit& tree, const std::map<std::string, double>& record);
double predict_row(const TreeFit& tree, const TreeData& data, std::size_t row);

// Index of the leaf that `row` falls into.
std::size_t leaf_of(const TreeFit& tree, const TreeData& data, std::size_t row);

}  // namespace lcr::tree
