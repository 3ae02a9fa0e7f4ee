#include "lcr/wardclust.hpp"

#include "lcr/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lcr::ward {

DistanceMatrix squared_euclidean(const Matrix& points) {
    const std::size_t n = points.rows();
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = points.row(i);
        for (double v : a) {
            if (std::isnan(v)) throw Error(ErrorKind::Domain, "NaN in clustering input");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto b = points.row(j);
            double s = 0.0;
            for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
            d.set(i, j, s);
        }
    }
    return d;
}

DistanceMatrix squared_euclidean(const StandardizedMatrix& m) { return squared_euclidean(m.values); }

Dendrogram ward_cluster(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    if (n < 2) throw Error(ErrorKind::InsufficientData, "Ward clustering needs at least 2 points");

    // Slot i always holds the cluster whose smallest member is point i. Costs are
    // kept as the sum-of-squares increase, so singletons start at half the
    // squared distance; the Lance-Williams update is linear and preserves that.
    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = 0.5 * d(i, j);
    }
    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), std::size_t{0});

    Dendrogram dend;
    dend.n = n;
    dend.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0;
        std::size_t bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (active[j] && cost[i * n + j] < best) {
                    best = cost[i * n + j];
                    bi = i;
                    bj = j;
                }
            }
        }
        const double ni = static_cast<double>(size[bi]);
        const double nj = static_cast<double>(size[bj]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double nk = static_cast<double>(size[k]);
            const double updated = ((ni + nk) * cost[k * n + bi] + (nj + nk) * cost[k * n + bj] -
                                    nk * cost[bi * n + bj]) /
                                   (ni + nj + nk);
            cost[k * n + bi] = updated;
            cost[bi * n + k] = updated;
        }
        dend.merges.push_back({id[bi], id[bj], best, size[bi] + size[bj]});
        size[bi] += size[bj];
        active[bj] = false;
        id[bi] = n + step;
    }
    return dend;
}

ClusterAssignment cut_k(const Dendrogram& dend, std::size_t k) {
    const std::size_t n = dend.n;
    if (k < 1 || k > n) {
        throw Error(ErrorKind::Domain,
                    "cut_k: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // A point standing in for each cluster id.
    std::vector<std::size_t> member(n + dend.merges.size());
    std::iota(member.begin(), member.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    for (std::size_t s = 0; s < n - k; ++s) {
        const auto& m = dend.merges[s];
        const std::size_t a = find(member[m.left]);
        const std::size_t b = find(member[m.right]);
        parent[std::max(a, b)] = std::min(a, b);
        member[n + s] = std::min(a, b);
    }

    ClusterAssignment out;
    out.k = k;
    out.labels.assign(n, 0);
    std::vector<std::size_t> label_of_root(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (label_of_root[r] == 0) {
            out.sizes.push_back(0);
            label_of_root[r] = out.sizes.size();
        }
        out.labels[i] = label_of_root[r];
        ++out.sizes[out.labels[i] - 1];
    }
    return out;
}

double within_cluster_sse(const Matrix& points, const ClusterAssignment& a) {
    const std::size_t p = points.cols();
    Matrix sums(a.k, p);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t c = 0; c < p; ++c) sums(a.labels[i] - 1, c) += points(i, c);
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const std::size_t g = a.labels[i] - 1;
        for (std::size_t c = 0; c < p; ++c) {
            const double centroid = sums(g, c) / static_cast<double>(a.sizes[g]);
            sse += (points(i, c) - centroid) * (points(i, c) - centroid);
        }
    }
    return sse;
}

}  // namespace lcr::ward
