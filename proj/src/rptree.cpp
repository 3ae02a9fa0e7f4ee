#include "lcr/rptree.hpp"

#include "lcr/distributions.hpp"
#include "lcr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lcr::tree {

namespace {

struct SumSquares {
    double mean = 0.0;
    double ss = 0.0;
};

template <typename Getter>
SumSquares sum_squares(std::size_t count, Getter get) {
    SumSquares out;
    if (count == 0) return out;
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += get(i);
    out.mean = sum / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double d = get(i) - out.mean;
        out.ss += d * d;
    }
    // Rounding noise around a constant is treated as exactly zero.
    if (out.ss <= 1e-24 * static_cast<double>(count) * out.mean * out.mean) out.ss = 0.0;
    return out;
}

// Fills the statistics of `s` from the two children's sums of squares.
void score(SplitCandidate& s, double ss_left, double ss_right) {
    s.ss_children = ss_left + ss_right;
    const std::size_t n = s.n_left + s.n_right;
    const double gain = std::max(0.0, s.ss_parent - s.ss_children);
    if (n <= 2 || gain <= 0.0) {
        s.f_stat = 0.0;
        s.p_raw = 1.0;
    } else if (s.ss_children <= 0.0) {
        s.f_stat = std::numeric_limits<double>::infinity();
        s.p_raw = 0.0;
    } else {
        const double df2 = static_cast<double>(n - 2);
        s.f_stat = gain / (s.ss_children / df2);
        s.p_raw = stat::f_sf(s.f_stat, 1.0, df2);
    }
    s.p_adj = std::min(1.0, s.p_raw * static_cast<double>(std::max<std::size_t>(s.m_cuts, 1)));
    s.logworth = s.p_adj > 0.0 ? std::clamp(-std::log10(s.p_adj), 0.0, kLogWorthCap) : kLogWorthCap;
}

std::size_t count_cuts(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto distinct = std::unique(values.begin(), values.end()) - values.begin();
    return distinct > 0 ? static_cast<std::size_t>(distinct - 1) : 0;
}

}  // namespace

std::size_t TreeData::predictor_index(const std::string& name) const {
    const auto it = std::find(predictors.begin(), predictors.end(), name);
    if (it == predictors.end()) throw Error(ErrorKind::Schema, "unknown predictor '" + name + "'");
    return static_cast<std::size_t>(it - predictors.begin());
}

void TreeConfig::validate() const {
    if (!(logworth_min >= 0.0)) throw Error(ErrorKind::Config, "logworth_min must be >= 0");
    if (min_leaf < 1) throw Error(ErrorKind::Config, "min_leaf must be >= 1");
}

std::vector<double> candidate_cuts(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> cuts;
    for (std::size_t i = 1; i < sorted.size(); ++i) cuts.push_back(0.5 * (sorted[i - 1] + sorted[i]));
    return cuts;
}

SplitCandidate evaluate_split(const TreeData& data, std::span<const std::size_t> rows,
                              const std::string& variable, double cut) {
    const std::size_t v = data.predictor_index(variable);
    std::vector<double> left;
    std::vector<double> right;
    std::vector<double> values;
    for (auto r : rows) {
        values.push_back(data.X(r, v));
        (data.X(r, v) < cut ? left : right).push_back(data.y[r]);
    }
    if (left.empty() || right.empty()) {
        throw Error(ErrorKind::DegenerateSplit,
                    "split " + variable + " < " + std::to_string(cut) + " leaves one side empty");
    }
    SplitCandidate s;
    s.variable = variable;
    s.variable_index = v;
    s.cut = cut;
    s.n_left = left.size();
    s.n_right = right.size();
    s.m_cuts = count_cuts(std::move(values));
    s.ss_parent = sum_squares(rows.size(), [&](std::size_t i) { return data.y[rows[i]]; }).ss;
    score(s, sum_squares(left.size(), [&](std::size_t i) { return left[i]; }).ss,
          sum_squares(right.size(), [&](std::size_t i) { return right[i]; }).ss);
    return s;
}

std::optional<SplitCandidate> best_split(const TreeData& data, std::span<const std::size_t> rows,
                                         const TreeConfig& config) {
    const std::size_t n = rows.size();
    if (n < 2 * config.min_leaf || n < 2) return std::nullopt;
    const double ss_parent = sum_squares(n, [&](std::size_t i) { return data.y[rows[i]]; }).ss;

    std::optional<SplitCandidate> best;
    std::vector<std::size_t> order(rows.begin(), rows.end());
    for (std::size_t v = 0; v < data.predictors.size(); ++v) {
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return data.X(a, v) < data.X(b, v); });
        std::vector<double> cuts;
        std::vector<std::size_t> split_at;  // rows before this position go left
        for (std::size_t i = 1; i < n; ++i) {
            const double lo = data.X(order[i - 1], v);
            const double hi = data.X(order[i], v);
            if (lo < hi) {
                cuts.push_back(0.5 * (lo + hi));
                split_at.push_back(i);
            }
        }
        for (std::size_t c = 0; c < cuts.size(); ++c) {
            const std::size_t k = split_at[c];
            if (k < config.min_leaf || n - k < config.min_leaf) continue;
            SplitCandidate s;
            s.variable = data.predictors[v];
            s.variable_index = v;
            s.cut = cuts[c];
            s.n_left = k;
            s.n_right = n - k;
            s.m_cuts = cuts.size();
            s.ss_parent = ss_parent;
            score(s, sum_squares(k, [&](std::size_t i) { return data.y[order[i]]; }).ss,
                  sum_squares(n - k, [&](std::size_t i) { return data.y[order[k + i]]; }).ss);
            // Equal partitions reached through different predictors differ only by
            // rounding; those count as ties and the earlier candidate is kept.
            if (!best || s.logworth > best->logworth + 1e-12 * std::max(1.0, best->logworth)) best = std::move(s);
        }
    }
    if (best && best->logworth > config.logworth_min) return best;
    return std::nullopt;
}

namespace {

void grow_node(const TreeData& data, std::vector<std::size_t> rows, std::size_t depth,
               const TreeConfig& config, TreeFit& fit, std::size_t index, double& sse) {
    const auto ss = sum_squares(rows.size(), [&](std::size_t i) { return data.y[rows[i]]; });
    fit.nodes[index].n = rows.size();
    fit.nodes[index].mean = ss.mean;
    fit.nodes[index].depth = depth;

    std::optional<SplitCandidate> split;
    if (depth < config.max_depth) split = best_split(data, rows, config);
    if (!split) {
        sse += ss.ss;
        ++fit.n_leaves;
        return;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) (data.X(r, split->variable_index) < split->cut ? left : right).push_back(r);

    const std::size_t li = fit.nodes.size();
    fit.nodes.emplace_back();
    const std::size_t ri = fit.nodes.size();
    fit.nodes.emplace_back();
    fit.nodes[index].split = std::move(split);
    fit.nodes[index].left = li;
    fit.nodes[index].right = ri;
    grow_node(data, std::move(left), depth + 1, config, fit, li, sse);
    grow_node(data, std::move(right), depth + 1, config, fit, ri, sse);
}

}  // namespace

TreeFit grow(const TreeData& data, const TreeConfig& config) {
    config.validate();
    if (data.size() < 1) throw Error(ErrorKind::InsufficientData, "cannot grow a tree on no rows");
    if (data.X.rows() != data.size() || data.X.cols() != data.predictors.size()) {
        throw Error(ErrorKind::Domain, "tree data: predictor matrix shape mismatch");
    }
    TreeFit fit;
    fit.nodes.emplace_back();
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    double sse = 0.0;
    grow_node(data, std::move(rows), 0, config, fit, 0, sse);

    const double sst = sum_squares(data.size(), [&](std::size_t i) { return data.y[i]; }).ss;
    fit.r2 = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 0.0;
    return fit;
}

double predict(const TreeFit& tree, const std::map<std::string, double>& record) {
    const TreeNode* node = &tree.root();
    while (!node->is_leaf()) {
        const auto it = record.find(node->split->variable);
        if (it == record.end()) {
            throw Error(ErrorKind::Schema, "record lacks split variable '" + node->split->variable + "'");
        }
        node = &tree.nodes[it->second < node->split->cut ? node->left : node->right];
    }
    return node->mean;
}

std::size_t leaf_of(const TreeFit& tree, const TreeData& data, std::size_t row) {
    std::size_t i = 0;
    while (!tree.nodes[i].is_leaf()) {
        const auto& s = *tree.nodes[i].split;
        i = data.X(row, data.predictor_index(s.variable)) < s.cut ? tree.nodes[i].left : tree.nodes[i].right;
    }
    return i;
}

double predict_row(const TreeFit& tree, const TreeData& data, std::size_t row) {
    return tree.nodes[leaf_of(tree, data, row)].mean;
}

}  // namespace lcr::tree
