#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/objects.hpp"
#include "frechet/random.hpp"
#include "frechet/special.hpp"

namespace frechet {

// Sample Fréchet mean, Fréchet variance and the plug-in estimator of the
// asymptotic variance of the Fréchet variance.
struct FrechetSummary {
    std::vector<double> mean_object;  // flat representation in the sample's space
    double variance = 0.0;            // mean squared distance to the mean object
    double sigma_sq = 0.0;            // variance of the squared distances
    std::size_t n = 0;
    bool approximate_mean = false;    // medoid fallback was used
};

enum class IntervalMethod { AsymptoticVariance, AsymptoticStdDev, BootstrapVariance };

struct IntervalEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    IntervalMethod method = IntervalMethod::AsymptoticVariance;
    std::size_t discarded_replicates = 0;
};

namespace detail {

inline FrechetSummary summary_from_sq_distances(std::vector<double> mean_object,
                                                std::span<const double> d2,
                                                bool approximate) {
    FrechetSummary s;
    s.mean_object = std::move(mean_object);
    s.n = d2.size();
    double m2 = 0.0, m4 = 0.0;
    for (double d : d2) {
        m2 += d;
        m4 += d * d;
    }
    m2 /= static_cast<double>(d2.size());
    m4 /= static_cast<double>(d2.size());
    s.variance = m2;
    s.sigma_sq = std::max(0.0, m4 - m2 * m2);
    s.approximate_mean = approximate;
    return s;
}

}  // namespace detail

inline FrechetSummary frechet_summary(const ObjectSample& sample) {
    std::vector<double> mean = closed_form_mean(sample);
    std::vector<double> d2(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        d2[i] = sample.squared_distance_to(mean, i);
    }
    return detail::summary_from_sq_distances(std::move(mean), d2, false);
}

// Pairwise distances for a caller-supplied metric: condensed upper triangle,
// entry for pair (i,j), i<j, at index i*n - i*(i+1)/2 + (j-i-1).
class DistanceMatrix {
public:
    DistanceMatrix(std::size_t n, std::vector<double> condensed)
        : n_(n), d_(std::move(condensed)) {
        if (n < 1) throw input_error("DistanceMatrix: n must be >= 1");
        if (d_.size() != n * (n - 1) / 2) {
            throw input_error("DistanceMatrix: condensed entry count must be n(n-1)/2");
        }
        for (double x : d_) {
            if (!(x >= 0.0) || !std::isfinite(x)) {
                throw input_error("DistanceMatrix: distances must be finite and non-negative");
            }
        }
    }

    std::size_t size() const { return n_; }

    double at(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return d_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
    }

private:
    std::size_t n_;
    std::vector<double> d_;
};

// Medoid-based summary for user-defined metric spaces: the mean object is the
// sample point minimizing the sum of squared distances, ties broken by lowest
// index, and the result is flagged approximate.
inline FrechetSummary frechet_summary_medoid(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    std::size_t best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = dist.at(c, i);
            s += d * d;
        }
        if (s < best_sum) {
            best_sum = s;
            best = c;
        }
    }
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = dist.at(best, i);
        d2[i] = d * d;
    }
    FrechetSummary s = detail::summary_from_sq_distances({static_cast<double>(best)}, d2, true);
    return s;
}

inline IntervalEstimate variance_interval(const FrechetSummary& summary, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw input_error("variance_interval: level must lie in (0,1)");
    }
    if (summary.n < 2) throw input_error("variance_interval: need n >= 2");
    if (summary.sigma_sq <= 0.0) {
        throw degenerate_error("variance_interval: sigma_sq is zero, sample is degenerate");
    }
    const double z = std_normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(summary.sigma_sq / static_cast<double>(summary.n));
    IntervalEstimate ci;
    ci.lower = std::max(0.0, summary.variance - half);
    ci.upper = summary.variance + half;
    ci.level = level;
    ci.method = IntervalMethod::AsymptoticVariance;
    return ci;
}

inline IntervalEstimate stddev_interval(const FrechetSummary& summary, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw input_error("stddev_interval: level must lie in (0,1)");
    }
    if (summary.variance <= 0.0) {
        throw degenerate_error("stddev_interval: variance is zero, sample is degenerate");
    }
    if (summary.sigma_sq <= 0.0) {
        throw degenerate_error("stddev_interval: sigma_sq is zero, sample is degenerate");
    }
    const double z = std_normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(summary.sigma_sq) /
                        (2.0 * std::sqrt(static_cast<double>(summary.n) * summary.variance));
    IntervalEstimate ci;
    ci.lower = std::max(0.0, std::sqrt(summary.variance) - half);
    ci.upper = std::sqrt(summary.variance) + half;
    ci.level = level;
    ci.method = IntervalMethod::AsymptoticStdDev;
    return ci;
}

// Bootstrap interval for the Fréchet variance based on the studentized root
// sqrt(m) (V*_m - V_hat) / sigma*_m. Quantiles of the resampled root replace
// the normal quantiles of the asymptotic interval.
inline IntervalEstimate bootstrap_variance_interval(const ObjectSample& sample, double level,
                                                    std::size_t replicates,
                                                    std::size_t resample_size,
                                                    std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) {
        throw input_error("bootstrap_variance_interval: level must lie in (0,1)");
    }
    if (sample.size() < 2) throw input_error("bootstrap_variance_interval: need n >= 2");
    if (replicates < 100) {
        throw input_error("bootstrap_variance_interval: need at least 100 replicates");
    }
    const std::size_t m = resample_size == 0 ? sample.size() : resample_size;
    if (m < 2) throw input_error("bootstrap_variance_interval: resample size must be >= 2");

    const FrechetSummary full = frechet_summary(sample);
    std::vector<double> roots;
    roots.reserve(replicates);
    std::size_t discarded = 0;
    std::vector<std::size_t> idx(m);
    for (std::size_t b = 0; b < replicates; ++b) {
        RandomStream stream(seed, stream_index_of(b, 0, "boot-ci"));
        for (std::size_t i = 0; i < m; ++i) idx[i] = stream.uniform_index(sample.size());
        const FrechetSummary rep = frechet_summary(sample.subsample(idx));
        if (rep.sigma_sq <= 0.0) {
            ++discarded;
            continue;
        }
        roots.push_back(std::sqrt(static_cast<double>(m)) * (rep.variance - full.variance) /
                        std::sqrt(rep.sigma_sq));
    }
    if (roots.empty()) {
        throw resampling_error("bootstrap_variance_interval: all replicates degenerate");
    }
    std::sort(roots.begin(), roots.end());
    const auto quantile_at = [&](double p) {
        const double pos = p * static_cast<double>(roots.size() - 1);
        const auto j = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(j);
        if (j + 1 >= roots.size()) return roots.back();
        return roots[j] * (1.0 - frac) + roots[j + 1] * frac;
    };
    const double q_hi = quantile_at(0.5 * (1.0 + level));
    const double q_lo = quantile_at(0.5 * (1.0 - level));
    const double scale = std::sqrt(full.sigma_sq / static_cast<double>(sample.size()));
    IntervalEstimate ci;
    ci.lower = std::max(0.0, full.variance - q_hi * scale);
    ci.upper = full.variance - q_lo * scale;
    ci.level = level;
    ci.method = IntervalMethod::BootstrapVariance;
    ci.discarded_replicates = discarded;
    return ci;
}

}  // namespace frechet
