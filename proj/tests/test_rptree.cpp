#include "lcr/error.hpp"
#include "lcr/rptree.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

using namespace lcr;
using namespace lcr::tree;

namespace {

std::vector<std::size_t> all_rows(const TreeData& d) {
    std::vector<std::size_t> rows(d.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

TreeData step_data() {
    TreeData d;
    d.predictors = {"x"};
    d.X = Matrix(20, 1);
    for (std::size_t i = 0; i < 20; ++i) {
        d.X(i, 0) = static_cast<double>(i) / 19.0;
        d.y.push_back(d.X(i, 0) < 0.5 ? 0.0 : 1.0);
    }
    return d;
}

TreeData random_tree_data(synth::Rng& rng, std::size_t n, std::size_t p) {
    TreeData d;
    for (std::size_t j = 0; j < p; ++j) d.predictors.push_back("x" + std::to_string(j));
    d.X = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) d.X(i, j) = std::round(rng.uniform(0, 20)) / 2.0;
        d.y.push_back(d.X(i, 0) > 5.0 ? 3.0 + rng.normal() : rng.normal());
    }
    return d;
}

// Depth-2 axis-aligned partition: region ids 0..3.
std::size_t planted_region(double x0, double x1, double x2) {
    if (x0 < 0.5) return x1 < 0.3 ? 0 : 1;
    return x2 < 0.7 ? 2 : 3;
}

void check_tree_invariants(const TreeFit& fit, const TreeConfig& cfg) {
    std::size_t internal = 0;
    for (const auto& node : fit.nodes) {
        if (node.is_leaf()) {
            CHECK(node.n >= cfg.min_leaf);
            continue;
        }
        ++internal;
        CHECK(node.split->logworth > cfg.logworth_min);
        CHECK(node.split->ss_children <= node.split->ss_parent + 1e-12);
        CHECK(node.n == fit.nodes[node.left].n + fit.nodes[node.right].n);
    }
    CHECK(fit.n_leaves == internal + 1);
}

}  // namespace

TEST_CASE("candidate_cuts") {
    const std::vector<double> a = {1, 2, 4};
    CHECK(candidate_cuts(a) == std::vector<double>{1.5, 3.0});
    const std::vector<double> flat = {5, 5, 5};
    CHECK(candidate_cuts(flat).empty());

    synth::Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(25);
        for (auto& x : v) x = std::round(rng.uniform(0, 10));
        const auto cuts = candidate_cuts(v);
        std::vector<double> distinct = v;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        CHECK(cuts.size() == distinct.size() - 1);
        for (double c : cuts) {
            const bool below = std::any_of(v.begin(), v.end(), [&](double x) { return x < c; });
            const bool above = std::any_of(v.begin(), v.end(), [&](double x) { return x >= c; });
            CHECK((below && above));
        }
    }
}

TEST_CASE("evaluate_split") {
    SUBCASE("constant response explains nothing") {
        TreeData d = step_data();
        std::fill(d.y.begin(), d.y.end(), 2.5);
        const auto rows = all_rows(d);
        const auto s = evaluate_split(d, rows, "x", 0.5);
        CHECK(s.f_stat == 0.0);
        CHECK(s.p_raw == 1.0);
        CHECK(s.logworth == 0.0);
    }
    SUBCASE("perfect separation is capped") {
        const TreeData d = step_data();
        const auto rows = all_rows(d);
        const auto s = evaluate_split(d, rows, "x", 0.5);
        CHECK(s.ss_children == 0.0);
        CHECK(s.logworth == kLogWorthCap);
        CHECK(s.n_left == 10);
        CHECK(s.m_cuts == 19);
    }
    SUBCASE("empty side is an error") {
        const TreeData d = step_data();
        const auto rows = all_rows(d);
        try {
            evaluate_split(d, rows, "x", 5.0);
            FAIL("expected degenerate split");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateSplit);
        }
    }
    SUBCASE("matches brute-force sums of squares") {
        synth::Rng rng(12);
        for (int rep = 0; rep < 100; ++rep) {
            const auto d = random_tree_data(rng, 12, 2);
            const auto rows = all_rows(d);
            const auto cuts = candidate_cuts(d.X.column(1));
            if (cuts.empty()) continue;
            const double cut = cuts[static_cast<std::size_t>(rep) % cuts.size()];
            const auto s = evaluate_split(d, rows, "x1", cut);
            std::vector<double> left;
            std::vector<double> right;
            for (std::size_t i = 0; i < 12; ++i) (d.X(i, 1) < cut ? left : right).push_back(d.y[i]);
            CHECK(std::fabs(s.ss_parent - oracle::sse_of(d.y)) <= 1e-10);
            CHECK(std::fabs(s.ss_children - oracle::sse_of(left) - oracle::sse_of(right)) <= 1e-10);
            CHECK(s.p_adj == doctest::Approx(std::min(1.0, s.p_raw * static_cast<double>(s.m_cuts))));
            CHECK(s.logworth == doctest::Approx(std::max(0.0, -std::log10(s.p_adj))));
        }
    }
}

TEST_CASE("best_split") {
    SUBCASE("binary predictor that determines y") {
        TreeData d;
        d.predictors = {"noise", "flag"};
        d.X = Matrix(30, 2);
        synth::Rng rng(4);
        for (std::size_t i = 0; i < 30; ++i) {
            d.X(i, 0) = rng.normal();
            d.X(i, 1) = i % 2 == 0 ? 0.0 : 1.0;
            d.y.push_back(d.X(i, 1) * 5.0);
        }
        const auto rows = all_rows(d);
        const auto s = best_split(d, rows, TreeConfig{});
        REQUIRE(s);
        CHECK(s->variable == "flag");
        CHECK(s->cut == 0.5);
    }
    SUBCASE("constant response has no split") {
        TreeData d = step_data();
        std::fill(d.y.begin(), d.y.end(), 1.0);
        const auto rows = all_rows(d);
        CHECK_FALSE(best_split(d, rows, TreeConfig{}).has_value());
    }
    SUBCASE("equals exhaustive enumeration") {
        synth::Rng rng(31);
        const TreeConfig cfg{0.0, 2, 6};
        for (int rep = 0; rep < 200; ++rep) {
            const auto d = random_tree_data(rng, 12, 2);
            const auto rows = all_rows(d);
            const auto got = best_split(d, rows, cfg);
            const auto want = oracle::best_split_exhaustive(d.X, d.y, cfg.min_leaf, cfg.logworth_min);
            REQUIRE(got.has_value() == want.has_value());
            if (!got) continue;
            CHECK(got->variable_index == want->variable);
            CHECK(got->cut == want->cut);
            CHECK(std::fabs(got->logworth - want->logworth) <= 1e-9);
        }
    }
}

TEST_CASE("grow") {
    SUBCASE("step function") {
        const auto fit = grow(step_data(), TreeConfig{});
        CHECK(fit.n_leaves == 2);
        CHECK(fit.r2 == doctest::Approx(1.0));
        CHECK(fit.nodes[fit.root().left].mean == 0.0);
        CHECK(fit.nodes[fit.root().right].mean == 1.0);
        CHECK(predict(fit, {{"x", 0.4}}) == 0.0);
        CHECK(predict(fit, {{"x", 0.6}}) == 1.0);
        CHECK_THROWS_AS(predict(fit, {{"z", 0.6}}), Error);
    }
    SUBCASE("constant response gives one leaf") {
        TreeData d = step_data();
        std::fill(d.y.begin(), d.y.end(), 7.0);
        const auto fit = grow(d, TreeConfig{});
        CHECK(fit.n_leaves == 1);
        CHECK(fit.r2 == 0.0);
        CHECK(predict(fit, {}) == 7.0);
    }
    SUBCASE("max_depth and min_leaf stop growth") {
        auto cfg = TreeConfig{};
        cfg.max_depth = 0;
        CHECK(grow(step_data(), cfg).n_leaves == 1);
        cfg = TreeConfig{};
        cfg.min_leaf = 11;
        CHECK(grow(step_data(), cfg).n_leaves == 1);
    }
    SUBCASE("invalid config") {
        TreeConfig cfg;
        cfg.min_leaf = 0;
        CHECK_THROWS_AS(grow(step_data(), cfg), Error);
    }
}

TEST_CASE("grow recovers a planted depth-2 partition") {
    int recovered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        synth::Rng rng(500 + seed);
        TreeData d;
        d.predictors = {"x0", "x1", "x2"};
        d.X = Matrix(200, 3);
        std::vector<std::size_t> truth;
        const double level[] = {0.0, 2.0, 4.0, 1.0};
        for (std::size_t i = 0; i < 200; ++i) {
            for (std::size_t j = 0; j < 3; ++j) d.X(i, j) = rng.uniform();
            truth.push_back(planted_region(d.X(i, 0), d.X(i, 1), d.X(i, 2)));
            d.y.push_back(level[truth.back()] + 0.3 * rng.normal());
        }
        const TreeConfig cfg;
        const auto fit = grow(d, cfg);
        check_tree_invariants(fit, cfg);

        std::map<std::size_t, std::map<std::size_t, std::size_t>> votes;
        for (std::size_t i = 0; i < 200; ++i) ++votes[leaf_of(fit, d, i)][truth[i]];
        std::size_t agree = 0;
        for (auto& [leaf, counts] : votes) {
            std::size_t best = 0;
            for (auto& [region, c] : counts) best = std::max(best, c);
            agree += best;
        }
        if (agree >= 190) ++recovered;

        double sse = 0.0;
        double sst = 0.0;
        const double mean = std::accumulate(d.y.begin(), d.y.end(), 0.0) / 200.0;
        for (std::size_t i = 0; i < 200; ++i) {
            sse += std::pow(d.y[i] - predict_row(fit, d, i), 2);
            sst += std::pow(d.y[i] - mean, 2);
        }
        CHECK(std::fabs(fit.r2 - (1.0 - sse / sst)) <= 1e-12);
    }
    CHECK(recovered >= 95);
}

TEST_CASE("positive affine response transforms keep the tree shape") {
    synth::Rng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        auto d = random_tree_data(rng, 60, 3);
        const auto base = grow(d, TreeConfig{});
        check_tree_invariants(base, TreeConfig{});
        for (auto& y : d.y) y = 2.5 * y - 4.0;
        const auto moved = grow(d, TreeConfig{});
        REQUIRE(moved.nodes.size() == base.nodes.size());
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            CHECK(moved.nodes[i].is_leaf() == base.nodes[i].is_leaf());
            CHECK(std::fabs(moved.nodes[i].mean - (2.5 * base.nodes[i].mean - 4.0)) <= 1e-9);
            if (!base.nodes[i].is_leaf()) {
                CHECK(moved.nodes[i].split->variable == base.nodes[i].split->variable);
                CHECK(moved.nodes[i].split->cut == base.nodes[i].split->cut);
            }
        }
    }
}
