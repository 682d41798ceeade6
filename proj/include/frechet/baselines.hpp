#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/frechet.hpp"
#include "frechet/ksample.hpp"
#include "frechet/random.hpp"

namespace frechet {

// Condensed pairwise distances of a pooled two-group sample, the only input
// both baseline tests need.
struct PairwiseDistances {
    std::size_t n = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<double> condensed;  // upper triangle, pair (i,j) i<j

    double at(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return condensed[i * n - i * (i + 1) / 2 + (j - i - 1)];
    }
};

struct BaselineReport {
    std::string test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t replicates_used = 0;
    std::uint64_t seed = 0;
    double bandwidth = 0.0;  // mmd only
};

inline PairwiseDistances pairwise_distances(const GroupedSample& data) {
    if (data.group_count() != 2) {
        throw input_error("pairwise_distances: baselines require exactly 2 groups");
    }
    const ObjectSample& s = data.sample();
    PairwiseDistances pd;
    pd.n = s.size();
    pd.n1 = data.group_size(0);
    pd.n2 = data.group_size(1);
    pd.condensed.reserve(pd.n * (pd.n - 1) / 2);
    // Objects are reordered so group 1 occupies indices [0, n1).
    std::vector<std::size_t> order;
    order.reserve(pd.n);
    for (int g = 0; g < 2; ++g) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (data.labels()[i] == g) order.push_back(i);
        }
    }
    for (std::size_t i = 0; i < pd.n; ++i) {
        for (std::size_t j = i + 1; j < pd.n; ++j) {
            pd.condensed.push_back(std::sqrt(s.squared_distance(order[i], order[j])));
        }
    }
    return pd;
}

namespace detail {

// Energy statistic 2*E(XY) - E(XX) - E(YY) with V-statistic (diagonal
// included) averages, so equal multisets give exactly zero.
inline double energy_statistic(const PairwiseDistances& pd, std::span<const int> side) {
    double cross = 0.0, within1 = 0.0, within2 = 0.0;
    std::size_t c1 = 0, c2 = 0;
    for (int s : side) (s == 0 ? c1 : c2)++;
    for (std::size_t i = 0; i < pd.n; ++i) {
        for (std::size_t j = i + 1; j < pd.n; ++j) {
            const double d = pd.at(i, j);
            if (side[i] == side[j]) {
                (side[i] == 0 ? within1 : within2) += d;
            } else {
                cross += d;
            }
        }
    }
    const double a1 = static_cast<double>(c1);
    const double a2 = static_cast<double>(c2);
    return 2.0 * cross / (a1 * a2) - 2.0 * within1 / (a1 * a1) - 2.0 * within2 / (a2 * a2);
}

// Unbiased (diagonal-excluded) squared MMD with kernel exp(-d^2 / (2 h^2)).
inline double mmd_statistic(const PairwiseDistances& pd, std::span<const int> side, double h) {
    double cross = 0.0, within1 = 0.0, within2 = 0.0;
    std::size_t c1 = 0, c2 = 0;
    for (int s : side) (s == 0 ? c1 : c2)++;
    const double inv2h2 = 1.0 / (2.0 * h * h);
    for (std::size_t i = 0; i < pd.n; ++i) {
        for (std::size_t j = i + 1; j < pd.n; ++j) {
            const double d = pd.at(i, j);
            const double k = std::exp(-d * d * inv2h2);
            if (side[i] == side[j]) {
                (side[i] == 0 ? within1 : within2) += k;
            } else {
                cross += k;
            }
        }
    }
    const double a1 = static_cast<double>(c1);
    const double a2 = static_cast<double>(c2);
    return 2.0 * within1 / (a1 * (a1 - 1.0)) + 2.0 * within2 / (a2 * (a2 - 1.0)) -
           2.0 * cross / (a1 * a2);
}

template <typename Statistic>
inline BaselineReport permutation_calibrated(const PairwiseDistances& pd, std::size_t replicates,
                                             std::uint64_t seed, const char* name,
                                             Statistic&& stat) {
    if (replicates < 99) throw input_error("baseline test: need at least 99 replicates");
    std::vector<int> side(pd.n, 0);
    for (std::size_t i = pd.n1; i < pd.n; ++i) side[i] = 1;
    BaselineReport report;
    report.test = name;
    report.seed = seed;
    report.statistic = stat(std::span<const int>(side));
    std::size_t at_least = 0;
    std::vector<int> perm = side;
    for (std::size_t b = 0; b < replicates; ++b) {
        RandomStream stream(seed, stream_index_of(b, 0, name));
        perm = side;
        for (std::size_t i = perm.size() - 1; i > 0; --i) {
            const std::size_t j = stream.uniform_index(i + 1);
            std::swap(perm[i], perm[j]);
        }
        if (stat(std::span<const int>(perm)) >= report.statistic) ++at_least;
    }
    report.replicates_used = replicates;
    report.p_value = static_cast<double>(1 + at_least) / static_cast<double>(replicates + 1);
    return report;
}

}  // namespace detail

inline BaselineReport energy_test(const GroupedSample& data, std::size_t replicates,
                                  std::uint64_t seed) {
    const PairwiseDistances pd = pairwise_distances(data);
    return detail::permutation_calibrated(pd, replicates, seed, "energy",
                                          [&](std::span<const int> side) {
                                              return detail::energy_statistic(pd, side);
                                          });
}

// Bandwidth: median of the pooled nonzero pairwise distances; an all-equal
// tie falls back to h = 1.
inline double median_heuristic_bandwidth(const PairwiseDistances& pd) {
    std::vector<double> nonzero;
    nonzero.reserve(pd.condensed.size());
    for (double d : pd.condensed) {
        if (d > 0.0) nonzero.push_back(d);
    }
    if (nonzero.empty()) return 1.0;
    std::sort(nonzero.begin(), nonzero.end());
    const std::size_t m = nonzero.size();
    return m % 2 == 1 ? nonzero[m / 2] : 0.5 * (nonzero[m / 2 - 1] + nonzero[m / 2]);
}

inline BaselineReport mmd_test(const GroupedSample& data, std::size_t replicates,
                               std::uint64_t seed) {
    const PairwiseDistances pd = pairwise_distances(data);
    bool any_nonzero = false;
    for (double d : pd.condensed) {
        if (d > 0.0) {
            any_nonzero = true;
            break;
        }
    }
    if (!any_nonzero) {
        throw degenerate_error("mmd_test: all pairwise distances are zero");
    }
    const double h = median_heuristic_bandwidth(pd);
    BaselineReport report = detail::permutation_calibrated(
        pd, replicates, seed, "mmd",
        [&](std::span<const int> side) { return detail::mmd_statistic(pd, side, h); });
    report.bandwidth = h;
    return report;
}

}  // namespace frechet
