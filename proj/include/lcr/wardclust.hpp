#pragma once

#include "lcr/dataset.hpp"
#include "lcr/matrix.hpp"

#include <cstddef>
#include <vector>

namespace lcr::ward {

// Symmetric, zero-diagonal dissimilarities.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        entries_[i * n_ + j] = v;
        entries_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

// Cluster ids follow the usual linkage convention: 0..n-1 are the input
// points, and merge step s creates cluster n + s.
struct MergeStep {
    std::size_t left = 0;   // cluster containing the smaller original index
    std::size_t right = 0;
    double height = 0.0;    // increase in within-cluster sum of squares
    std::size_t size = 0;

    bool operator==(const MergeStep&) const = default;
};

struct Dendrogram {
    std::size_t n = 0;
    std::vector<MergeStep> merges;

    bool operator==(const Dendrogram&) const = default;
};

struct ClusterAssignment {
    std::vector<std::size_t> labels;  // 1..k, numbered by each cluster's smallest member index
    std::size_t k = 0;
    std::vector<std::size_t> sizes;   // sizes[c - 1] is the size of cluster c
};

DistanceMatrix squared_euclidean(const Matrix& points);
DistanceMatrix squared_euclidean(const StandardizedMatrix& m);

// Ward's minimum-variance agglomeration on squared Euclidean input.
Dendrogram ward_cluster(const DistanceMatrix& d);

ClusterAssignment cut_k(const Dendrogram& dend, std::size_t k);

// Total within-cluster sum of squares of `points` under `labels`.
double within_cluster_sse(const Matrix& points, const ClusterAssignment& a);

}  // namespace lcr::ward
