#pragma once

#include "lcr/dataset.hpp"
#include "lcr/matrix.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace lcr {
struct LcrReport;
}

namespace lcr::synth {

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 seeded per cluster with splitmix64(seed + cluster); normals by Box-Muller";

// Deterministic variates independent of the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

struct ExposureRange {
    double low = 0.0;
    double high = 1.0;
};

struct SynthConfig {
    std::size_t k = 0;
    std::vector<std::size_t> n_per_cluster;
    // Covariates carrying the planted cluster structure; other canonical
    // covariates are standard normal noise.
    std::vector<std::string> covariates;
    Matrix centers;  // k x covariates.size()
    double spread = 1.0;
    std::vector<double> true_intercepts;
    std::vector<double> true_slopes;
    std::vector<ExposureRange> exposure;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;
    bool well_separated = false;  // centers at least 6 * spread apart

    void validate() const;
};

struct SynthDataset {
    Dataset data;
    std::vector<std::size_t> true_labels;  // 1..k, aligned with data.records
    SynthConfig config;
};

// A ready-made well-separated configuration over the default clustering
// variables, with intercepts, slopes and centers drawn from `seed`.
SynthConfig default_config(std::size_t k, std::size_t n_per_cluster, double noise_sd, std::uint64_t seed);

SynthDataset generate(const SynthConfig& cfg);

struct ClusterRecovery {
    std::size_t true_cluster = 0;
    std::size_t estimated_cluster = 0;  // 0 when unmatched
    double true_slope = 0.0;
    double estimated_slope = 0.0;
    double abs_slope_error = 0.0;
    bool fitted = false;
    bool covered = false;  // true slope inside the 95% interval
};

struct RecoveryMetrics {
    std::vector<ClusterRecovery> clusters;
    std::size_t k_true = 0;
    std::size_t k_estimated = 0;
    std::size_t n_evaluated = 0;
    std::size_t n_covered = 0;
    double coverage = 0.0;
    double mean_abs_slope_error = 0.0;
    double partition_agreement = 0.0;  // Rand index
};

RecoveryMetrics evaluate_recovery(const SynthDataset& sd, const LcrReport& report);

// Rand index between two labelings of the same items.
double rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace lcr::synth
