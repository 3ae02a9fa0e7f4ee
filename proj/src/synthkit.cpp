#include "lcr/synthkit.hpp"

#include "lcr/distributions.hpp"
#include "lcr/error.hpp"
#include "lcr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace lcr::synth {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void SynthConfig::validate() const {
    if (k < 1) throw Error(ErrorKind::Domain, "synth: k must be >= 1");
    if (!(spread > 0.0)) throw Error(ErrorKind::Domain, "synth: spread must be positive");
    if (!(noise_sd >= 0.0)) throw Error(ErrorKind::Domain, "synth: noise_sd must be >= 0");
    if (n_per_cluster.size() != k || true_intercepts.size() != k || true_slopes.size() != k ||
        exposure.size() != k || centers.rows() != k || centers.cols() != covariates.size()) {
        throw Error(ErrorKind::Domain, "synth: per-cluster settings must all have length k");
    }
    for (const auto& c : covariates) {
        const auto& canon = canonical_variables();
        if (std::find(canon.begin(), canon.end(), c) == canon.end() || c == var::kChangeLE ||
            c == var::kChangePM) {
            throw Error(ErrorKind::Domain, "synth: '" + c + "' is not a covariate");
        }
    }
    for (const auto& r : exposure) {
        if (!(r.high > r.low)) throw Error(ErrorKind::Domain, "synth: exposure range must have high > low");
    }
    if (well_separated) {
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                double d2 = 0.0;
                for (std::size_t c = 0; c < centers.cols(); ++c) {
                    d2 += (centers(a, c) - centers(b, c)) * (centers(a, c) - centers(b, c));
                }
                if (std::sqrt(d2) < 6.0 * spread) {
                    throw Error(ErrorKind::Domain, "synth: centers closer than 6 * spread");
                }
            }
        }
    }
}

SynthConfig default_config(std::size_t k, std::size_t n_per_cluster, double noise_sd, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.k = k;
    cfg.n_per_cluster.assign(k, n_per_cluster);
    cfg.covariates = default_cluster_vars();
    cfg.spread = 1.0;
    cfg.noise_sd = noise_sd;
    cfg.seed = seed;
    cfg.well_separated = true;

    Rng rng(splitmix64(seed ^ 0x5eed5eed5eed5eedULL));
    const std::size_t p = cfg.covariates.size();
    const double min_sep = 8.0 * cfg.spread;
    double box = min_sep * 1.5 * std::ceil(std::pow(static_cast<double>(k), 1.0 / static_cast<double>(p)));
    cfg.centers = Matrix(k, p);
    for (std::size_t c = 0; c < k;) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000) {
                box *= 1.25;
                attempt = 0;
            }
            for (std::size_t j = 0; j < p; ++j) cfg.centers(c, j) = rng.uniform(0.0, box);
            bool ok = true;
            for (std::size_t o = 0; o < c && ok; ++o) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < p; ++j) {
                    d2 += (cfg.centers(c, j) - cfg.centers(o, j)) * (cfg.centers(c, j) - cfg.centers(o, j));
                }
                ok = d2 >= min_sep * min_sep;
            }
            if (ok) break;
        }
        ++c;
    }
    for (std::size_t c = 0; c < k; ++c) {
        cfg.true_intercepts.push_back(rng.uniform(1.5, 4.0));
        cfg.true_slopes.push_back(rng.uniform(-0.15, 0.2));
        cfg.exposure.push_back({2.0, 12.0});
    }
    return cfg;
}

SynthDataset generate(const SynthConfig& cfg) {
    cfg.validate();
    SynthDataset out;
    out.config = cfg;
    out.data.variables = canonical_variables();
    const auto& vars = out.data.variables;
    const std::size_t response = out.data.index_of(var::kChangeLE);
    const std::size_t exposure = out.data.index_of(var::kChangePM);
    std::vector<std::ptrdiff_t> planted(vars.size(), -1);
    for (std::size_t j = 0; j < cfg.covariates.size(); ++j) {
        planted[out.data.index_of(cfg.covariates[j])] = static_cast<std::ptrdiff_t>(j);
    }

    std::int64_t next_id = 1;
    for (std::size_t c = 0; c < cfg.k; ++c) {
        Rng rng(splitmix64(cfg.seed + c));
        for (std::size_t i = 0; i < cfg.n_per_cluster[c]; ++i) {
            LocationRecord rec;
            rec.row_id = next_id++;
            rec.label = "synth_c" + std::to_string(c + 1) + "_" + std::to_string(i + 1);
            rec.values.assign(vars.size(), 0.0);
            for (std::size_t v = 0; v < vars.size(); ++v) {
                if (v == response || v == exposure) continue;
                rec.values[v] = planted[v] >= 0
                                    ? cfg.centers(c, static_cast<std::size_t>(planted[v])) + cfg.spread * rng.normal()
                                    : rng.normal();
            }
            const double x = rng.uniform(cfg.exposure[c].low, cfg.exposure[c].high);
            rec.values[exposure] = x;
            rec.values[response] = cfg.true_intercepts[c] + cfg.true_slopes[c] * x + cfg.noise_sd * rng.normal();
            out.data.records.push_back(std::move(rec));
            out.true_labels.push_back(c + 1);
        }
    }
    return out;
}

double rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::Domain, "rand_index: label vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
        }
    }
    return static_cast<double>(agree) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

RecoveryMetrics evaluate_recovery(const SynthDataset& sd, const LcrReport& report) {
    RecoveryMetrics m;
    m.k_true = sd.config.k;
    m.k_estimated = report.clusters.size();

    std::unordered_map<std::int64_t, std::size_t> truth;
    for (std::size_t i = 0; i < sd.data.records.size(); ++i) truth[sd.data.records[i].row_id] = sd.true_labels[i];

    std::vector<std::size_t> true_labels;
    std::vector<std::size_t> est_labels;
    Matrix overlap(m.k_true, std::max<std::size_t>(m.k_estimated, 1));
    for (const auto& a : report.augmented) {
        const auto it = truth.find(a.record.row_id);
        if (it == truth.end()) continue;
        true_labels.push_back(it->second);
        est_labels.push_back(a.cluster);
        overlap(it->second - 1, a.cluster - 1) += 1.0;
    }
    m.partition_agreement = rand_index(true_labels, est_labels);

    // Greedy maximal-overlap matching; ties go to the smaller (true, estimated) pair.
    std::vector<std::size_t> match(m.k_true, 0);
    std::vector<bool> used_true(m.k_true, false);
    std::vector<bool> used_est(m.k_estimated, false);
    for (std::size_t round = 0; round < std::min(m.k_true, m.k_estimated); ++round) {
        double best = 0.0;
        std::size_t bt = 0;
        std::size_t be = 0;
        for (std::size_t t = 0; t < m.k_true; ++t) {
            if (used_true[t]) continue;
            for (std::size_t e = 0; e < m.k_estimated; ++e) {
                if (!used_est[e] && overlap(t, e) > best) {
                    best = overlap(t, e);
                    bt = t;
                    be = e;
                }
            }
        }
        if (best <= 0.0) break;
        used_true[bt] = true;
        used_est[be] = true;
        match[bt] = be + 1;
    }

    double err_sum = 0.0;
    for (std::size_t t = 0; t < m.k_true; ++t) {
        ClusterRecovery r;
        r.true_cluster = t + 1;
        r.estimated_cluster = match[t];
        r.true_slope = sd.config.true_slopes[t];
        if (match[t] != 0) {
            const auto& row = report.clusters[match[t] - 1];
            if (row.fit) {
                r.fitted = true;
                r.estimated_slope = row.fit->slope;
                r.abs_slope_error = std::fabs(row.fit->slope - r.true_slope);
                if (row.fit->perfect_fit) {
                    r.covered = r.abs_slope_error <= 1e-9 * std::max(1.0, std::fabs(r.true_slope));
                } else {
                    const double q = stat::t_quantile(0.975, static_cast<double>(row.fit->df));
                    r.covered = r.abs_slope_error <= q * row.fit->se_slope;
                }
                ++m.n_evaluated;
                if (r.covered) ++m.n_covered;
                err_sum += r.abs_slope_error;
            }
        }
        m.clusters.push_back(r);
    }
    if (m.n_evaluated > 0) {
        m.coverage = static_cast<double>(m.n_covered) / static_cast<double>(m.n_evaluated);
        m.mean_abs_slope_error = err_sum / static_cast<double>(m.n_evaluated);
    }
    return m;
}

}  // namespace lcr::synth
