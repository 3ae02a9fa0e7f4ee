#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include "lcr/distributions.hpp"
#include "lcr/matrix.hpp"
#include "lcr/synthkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Solves A x = b by Gauss-Jordan elimination with partial pivoting; A is square.
inline std::vector<double> gauss_solve(lcr::Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(a(r, c)) > std::fabs(a(piv, c))) piv = r;
        }
        for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
        std::swap(b[c], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a(r, c) / a(c, c);
            for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a(i, i);
    return b;
}

struct NormalEquationsFit {
    std::vector<double> beta;
    std::vector<double> se;
};

// beta = (X'X)^-1 X'y with SEs from the diagonal of s^2 (X'X)^-1.
inline NormalEquationsFit normal_equations(const lcr::Matrix& x, const std::vector<double>& y) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    lcr::Matrix xtx(p, p);
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += x(i, a) * y[i];
            for (std::size_t b = 0; b < p; ++b) xtx(a, b) += x(i, a) * x(i, b);
        }
    }
    NormalEquationsFit fit;
    fit.beta = gauss_solve(xtx, xty);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t a = 0; a < p; ++a) pred += x(i, a) * fit.beta[a];
        rss += (y[i] - pred) * (y[i] - pred);
    }
    const double s2 = rss / static_cast<double>(n - p);
    for (std::size_t a = 0; a < p; ++a) {
        std::vector<double> e(p, 0.0);
        e[a] = 1.0;
        fit.se.push_back(std::sqrt(s2 * gauss_solve(xtx, e)[a]));
    }
    return fit;
}

inline double cauchy_cdf(double t) { return 0.5 + std::atan(t) / std::numbers::pi; }

inline double t_pdf(double t, double df) {
    const double logc = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * std::numbers::pi);
    return std::exp(logc - (df + 1.0) / 2.0 * std::log1p(t * t / df));
}

// 0.5 + integral of the t density over [0, t], composite Simpson with `intervals` panels.
inline double t_cdf_by_quadrature(double t, double df, std::size_t intervals = 1'000'000) {
    if (intervals % 2 == 1) ++intervals;
    const double h = t / static_cast<double>(intervals);
    double s = t_pdf(0.0, df) + t_pdf(t, df);
    for (std::size_t i = 1; i < intervals; ++i) {
        s += (i % 2 == 1 ? 4.0 : 2.0) * t_pdf(h * static_cast<double>(i), df);
    }
    return 0.5 + s * h / 3.0;
}

// One greedy Ward merge expressed by the two clusters' smallest members.
struct OracleMerge {
    std::size_t rep_a = 0;
    std::size_t rep_b = 0;
    double sse_increase = 0.0;
};

inline double cluster_sse(const lcr::Matrix& pts, const std::vector<std::size_t>& members) {
    double sse = 0.0;
    for (std::size_t c = 0; c < pts.cols(); ++c) {
        double mean = 0.0;
        for (auto m : members) mean += pts(m, c);
        mean /= static_cast<double>(members.size());
        for (auto m : members) sse += (pts(m, c) - mean) * (pts(m, c) - mean);
    }
    return sse;
}

// Exhaustive agglomeration: every step recomputes each pair's SSE increase from
// the raw points. Clusters are kept sorted by smallest member.
inline std::vector<OracleMerge> ward_by_sse(const lcr::Matrix& pts) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < pts.rows(); ++i) clusters.push_back({i});
    std::vector<OracleMerge> merges;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0;
        std::size_t bb = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                auto merged = clusters[a];
                merged.insert(merged.end(), clusters[b].begin(), clusters[b].end());
                const double inc = cluster_sse(pts, merged) - cluster_sse(pts, clusters[a]) - cluster_sse(pts, clusters[b]);
                if (inc < best) {
                    best = inc;
                    ba = a;
                    bb = b;
                }
            }
        }
        merges.push_back({clusters[ba].front(), clusters[bb].front(), best});
        clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
        std::sort(clusters[ba].begin(), clusters[ba].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    }
    return merges;
}

struct OracleSplit {
    std::size_t variable = 0;
    double cut = 0.0;
    double logworth = 0.0;
    double ss_children = 0.0;
};

inline double sse_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s;
}

// Enumerates every (variable, midpoint) pair, recomputing both sides from scratch.
inline std::optional<OracleSplit> best_split_exhaustive(const lcr::Matrix& x, const std::vector<double>& y,
                                                        std::size_t min_leaf, double logworth_min) {
    const std::size_t n = y.size();
    const double ss_parent = sse_of(y);
    std::optional<OracleSplit> best;
    for (std::size_t v = 0; v < x.cols(); ++v) {
        std::vector<double> vals = x.column(v);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        const std::size_t m_cuts = vals.size() - 1;
        for (std::size_t c = 0; c + 1 < vals.size(); ++c) {
            const double cut = (vals[c] + vals[c + 1]) / 2.0;
            std::vector<double> left;
            std::vector<double> right;
            for (std::size_t i = 0; i < n; ++i) (x(i, v) < cut ? left : right).push_back(y[i]);
            if (left.size() < min_leaf || right.size() < min_leaf) continue;
            const double ssc = sse_of(left) + sse_of(right);
            double logworth = 0.0;
            const double gain = ss_parent - ssc;
            if (gain > 0.0 && n > 2) {
                double p = 0.0;
                if (ssc > 0.0) {
                    const double f = gain / (ssc / static_cast<double>(n - 2));
                    p = lcr::stat::f_sf(f, 1.0, static_cast<double>(n - 2));
                }
                const double padj = std::min(1.0, p * static_cast<double>(m_cuts));
                logworth = padj > 0.0 ? std::clamp(-std::log10(padj), 0.0, 300.0) : 300.0;
            }
            if (!best || logworth > best->logworth) best = OracleSplit{v, cut, logworth, ssc};
        }
    }
    if (best && best->logworth > logworth_min) return best;
    return std::nullopt;
}

inline lcr::Matrix random_matrix(lcr::synth::Rng& rng, std::size_t rows, std::size_t cols) {
    lcr::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal();
    }
    return m;
}

}  // namespace oracle
