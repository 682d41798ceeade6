#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/frechet.hpp"
#include "frechet/objects.hpp"
#include "frechet/random.hpp"
#include "frechet/special.hpp"

namespace frechet {

// Objects with a group label per object. Labels are 1..k on the outside,
// stored 0-based internally.
class GroupedSample {
public:
    GroupedSample(ObjectSample sample, std::vector<int> labels, int k)
        : sample_(std::move(sample)), labels_(std::move(labels)), k_(k) {
        if (k_ < 2) throw input_error("GroupedSample: need at least 2 groups");
        if (labels_.size() != sample_.size()) {
            throw input_error("GroupedSample: one label per object required");
        }
        group_sizes_.assign(static_cast<std::size_t>(k_), 0);
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            const int g = labels_[i];
            if (g < 1 || g > k_) {
                throw input_error("GroupedSample: label " + std::to_string(g) + " at object " +
                                  std::to_string(i) + " outside 1.." + std::to_string(k_));
            }
            labels_[i] = g - 1;
            ++group_sizes_[static_cast<std::size_t>(g - 1)];
        }
        for (int j = 0; j < k_; ++j) {
            if (group_sizes_[static_cast<std::size_t>(j)] < 2) {
                throw input_error("GroupedSample: group " + std::to_string(j + 1) +
                                  " has fewer than 2 objects");
            }
        }
    }

    const ObjectSample& sample() const { return sample_; }
    std::span<const int> labels() const { return labels_; }  // 0-based
    int group_count() const { return k_; }
    std::size_t size() const { return sample_.size(); }
    std::size_t group_size(int j) const { return group_sizes_[static_cast<std::size_t>(j)]; }

private:
    ObjectSample sample_;
    std::vector<int> labels_;
    int k_;
    std::vector<std::size_t> group_sizes_;
};

struct GroupSummaries {
    std::vector<std::vector<double>> group_means;  // flat objects
    std::vector<double> v_hat;
    std::vector<double> sigma_sq;
    std::vector<double> lambda;
    std::vector<std::size_t> sizes;
    std::vector<double> pooled_mean;
    double v_pooled = 0.0;
    bool approximate_means = false;
};

namespace detail {

// Groupwise and pooled Fréchet quantities in one pass over the flat data.
// Means are the closed-form averages; squared distances use the space weight.
// Returns false (instead of throwing) when a group variance estimate is zero,
// so resampling loops can discard degenerate replicates cheaply.
class KSampleEngine {
public:
    explicit KSampleEngine(const ObjectSample& s) : sample_(&s), len_(s.object_length()) {}

    bool compute(std::span<const int> labels, int k, GroupSummaries& out) const {
        const ObjectSample& s = *sample_;
        const std::size_t n = s.size();
        const auto uk = static_cast<std::size_t>(k);
        out.sizes.assign(uk, 0);
        out.group_means.assign(uk, std::vector<double>(len_, 0.0));
        out.pooled_mean.assign(len_, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = static_cast<std::size_t>(labels[i]);
            ++out.sizes[g];
            const auto obj = s.object(i);
            double* gm = out.group_means[g].data();
            for (std::size_t t = 0; t < len_; ++t) gm[t] += obj[t];
        }
        for (std::size_t g = 0; g < uk; ++g) {
            const double inv = 1.0 / static_cast<double>(out.sizes[g]);
            double* gm = out.group_means[g].data();
            for (std::size_t t = 0; t < len_; ++t) {
                out.pooled_mean[t] += gm[t];
                gm[t] *= inv;
            }
        }
        for (std::size_t t = 0; t < len_; ++t) {
            out.pooled_mean[t] /= static_cast<double>(n);
        }

        out.v_hat.assign(uk, 0.0);
        out.sigma_sq.assign(uk, 0.0);
        out.lambda.assign(uk, 0.0);
        out.v_pooled = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = static_cast<std::size_t>(labels[i]);
            const double d2g = s.squared_distance_to(out.group_means[g], i);
            out.v_hat[g] += d2g;
            out.sigma_sq[g] += d2g * d2g;
            out.v_pooled += s.squared_distance_to(out.pooled_mean, i);
        }
        out.v_pooled /= static_cast<double>(n);
        bool ok = true;
        for (std::size_t g = 0; g < uk; ++g) {
            const double ng = static_cast<double>(out.sizes[g]);
            out.lambda[g] = ng / static_cast<double>(n);
            out.v_hat[g] /= ng;
            out.sigma_sq[g] = std::max(0.0, out.sigma_sq[g] / ng - out.v_hat[g] * out.v_hat[g]);
            if (out.sigma_sq[g] <= 0.0) ok = false;
        }
        out.approximate_means = false;
        return ok;
    }

private:
    const ObjectSample* sample_;
    std::size_t len_;
};

}  // namespace detail

inline GroupSummaries group_summaries(const GroupedSample& data) {
    GroupSummaries out;
    detail::KSampleEngine engine(data.sample());
    engine.compute(data.labels(), data.group_count(), out);
    for (std::size_t g = 0; g < out.v_hat.size(); ++g) {
        if (out.v_hat[g] <= 0.0) {
            throw degenerate_error("group_summaries: group " + std::to_string(g + 1) +
                                   " has zero variance estimate");
        }
    }
    return out;
}

// F_n = V_pooled - sum_j lambda_j V_j; clamped at zero against round-off.
inline double fn_statistic(const GroupSummaries& s) {
    double within = 0.0;
    for (std::size_t g = 0; g < s.v_hat.size(); ++g) within += s.lambda[g] * s.v_hat[g];
    return std::max(0.0, s.v_pooled - within);
}

// U_n = sum_{j<l} lambda_j lambda_l / (sigma_j^2 sigma_l^2) (V_j - V_l)^2.
inline double un_statistic(const GroupSummaries& s, double ridge = 0.0) {
    double u = 0.0;
    for (std::size_t j = 0; j < s.v_hat.size(); ++j) {
        const double sj = s.sigma_sq[j] + ridge;
        if (sj <= 0.0) {
            throw degenerate_error("un_statistic: group " + std::to_string(j + 1) +
                                   " has zero variance estimate");
        }
        for (std::size_t l = j + 1; l < s.v_hat.size(); ++l) {
            const double sl = s.sigma_sq[l] + ridge;
            const double dv = s.v_hat[j] - s.v_hat[l];
            u += s.lambda[j] * s.lambda[l] / (sj * sl) * dv * dv;
        }
    }
    return u;
}

// T_n = n U_n / sum(lambda_j / sigma_j^2) + n F_n^2 / sum(lambda_j^2 sigma_j^2).
inline double tn_statistic(const GroupSummaries& s, double ridge = 0.0) {
    std::size_t n = 0;
    for (std::size_t g = 0; g < s.sizes.size(); ++g) n += s.sizes[g];
    double inv_weight = 0.0;
    double f_scale = 0.0;
    for (std::size_t g = 0; g < s.sigma_sq.size(); ++g) {
        const double sg = s.sigma_sq[g] + ridge;
        if (sg <= 0.0) {
            throw degenerate_error("tn_statistic: group " + std::to_string(g + 1) +
                                   " has zero variance estimate");
        }
        inv_weight += s.lambda[g] / sg;
        f_scale += s.lambda[g] * s.lambda[g] * sg;
    }
    const double f = fn_statistic(s);
    const double u = un_statistic(s, ridge);
    const double nn = static_cast<double>(n);
    return nn * u / inv_weight + nn * f * f / f_scale;
}

enum class TestMethod { Asymptotic, Permutation, Bootstrap };

inline const char* to_string(TestMethod m) {
    switch (m) {
        case TestMethod::Asymptotic: return "asymptotic";
        case TestMethod::Permutation: return "permutation";
        case TestMethod::Bootstrap: return "bootstrap";
    }
    return "?";
}

struct KSampleReport {
    GroupSummaries summaries;
    double f_n = 0.0;
    double u_n = 0.0;
    double t_n = 0.0;
    int df = 0;
    double p_asymptotic = 1.0;
    std::optional<double> p_resampled;
    TestMethod method = TestMethod::Asymptotic;
    std::size_t replicates_used = 0;
    std::size_t discarded_replicates = 0;
    std::uint64_t seed = 0;
    double alpha = 0.05;
    bool reject = false;
};

namespace detail {

inline KSampleReport base_report(const GroupedSample& data, double ridge) {
    KSampleReport r;
    r.summaries = group_summaries(data);
    r.f_n = fn_statistic(r.summaries);
    r.u_n = un_statistic(r.summaries, ridge);
    r.t_n = tn_statistic(r.summaries, ridge);
    r.df = data.group_count() - 1;
    r.p_asymptotic = chi_square_sf(r.t_n, r.df);
    return r;
}

// Resampling loop shared by the permutation and the bootstrap test. The
// callback fills a label vector for one replicate from its derived stream.
template <typename MakeLabels>
inline KSampleReport resampled_test(const GroupedSample& data, std::size_t replicates,
                                    std::uint64_t seed, double alpha, TestMethod method,
                                    double ridge, MakeLabels&& make_replicate) {
    if (replicates < 99) throw input_error("resampled test: need at least 99 replicates");
    KSampleReport report = base_report(data, ridge);
    report.method = method;
    report.seed = seed;
    report.alpha = alpha;

    KSampleEngine engine(data.sample());
    GroupSummaries scratch;
    std::size_t at_least = 0;
    std::size_t discarded = 0;
    for (std::size_t b = 0; b < replicates; ++b) {
        RandomStream stream(seed, stream_index_of(b, 0, to_string(method)));
        const bool ok = make_replicate(stream, scratch, engine);
        if (!ok) {
            ++discarded;
            continue;
        }
        double t_star;
        try {
            t_star = tn_statistic(scratch, ridge);
        } catch (const degenerate_error&) {
            ++discarded;
            continue;
        }
        // tolerance so round-off in a near-zero observed T_n cannot flip counts
        if (t_star >= report.t_n - 1e-12 * (1.0 + report.t_n)) ++at_least;
    }
    if (discarded * 2 > replicates) {
        throw resampling_error("resampled test: more than half of the replicates degenerate (" +
                               std::to_string(discarded) + " of " + std::to_string(replicates) +
                               ")");
    }
    const std::size_t used = replicates - discarded;
    report.replicates_used = used;
    report.discarded_replicates = discarded;
    report.p_resampled = static_cast<double>(1 + at_least) / static_cast<double>(used + 1);
    report.reject = *report.p_resampled <= alpha;
    return report;
}

}  // namespace detail

inline KSampleReport asymptotic_test(const GroupedSample& data, double alpha,
                                     double ridge = 0.0) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("asymptotic_test: alpha must be in (0,1)");
    KSampleReport r = detail::base_report(data, ridge);
    r.method = TestMethod::Asymptotic;
    r.alpha = alpha;
    r.reject = r.t_n > chi_square_quantile(1.0 - alpha, r.df);
    return r;
}

// Label-permutation test: group sizes are preserved, the assignment of
// objects to groups is shuffled.
inline KSampleReport permutation_test(const GroupedSample& data, std::size_t replicates,
                                      std::uint64_t seed, double alpha = 0.05,
                                      double ridge = 0.0) {
    std::vector<int> base(data.labels().begin(), data.labels().end());
    std::vector<int> perm(base.size());
    return detail::resampled_test(
        data, replicates, seed, alpha, TestMethod::Permutation, ridge,
        [&](RandomStream& stream, GroupSummaries& out, const detail::KSampleEngine& engine) {
            perm = base;
            for (std::size_t i = perm.size() - 1; i > 0; --i) {
                const std::size_t j = stream.uniform_index(i + 1);
                std::swap(perm[i], perm[j]);
            }
            return engine.compute(perm, data.group_count(), out);
        });
}

// Pooled bootstrap test: each replicate draws n objects with replacement from
// the pooled sample and reassigns the original group sizes, imposing the null.
inline KSampleReport bootstrap_test(const GroupedSample& data, std::size_t replicates,
                                    std::uint64_t seed, double alpha = 0.05,
                                    double ridge = 0.0) {
    const std::size_t n = data.size();
    // Block layout of labels: group 1 gets the first n_1 resampled objects, etc.
    std::vector<int> block_labels(n);
    {
        std::size_t pos = 0;
        for (int g = 0; g < data.group_count(); ++g) {
            for (std::size_t i = 0; i < data.group_size(g); ++i) block_labels[pos++] = g;
        }
    }
    std::vector<std::size_t> idx(n);
    return detail::resampled_test(
        data, replicates, seed, alpha, TestMethod::Bootstrap, ridge,
        [&](RandomStream& stream, GroupSummaries& out, const detail::KSampleEngine&) {
            for (std::size_t i = 0; i < n; ++i) idx[i] = stream.uniform_index(n);
            const ObjectSample resampled = data.sample().subsample(idx);
            detail::KSampleEngine engine(resampled);
            return engine.compute(block_labels, data.group_count(), out);
        });
}

// Grouped statistics over a caller-supplied distance table. Group means are
// medoids, so summaries are flagged approximate.
inline GroupSummaries group_summaries_from_distances(const DistanceMatrix& dist,
                                                     std::span<const int> labels_one_based,
                                                     int k) {
    if (k < 2) throw input_error("group_summaries_from_distances: need at least 2 groups");
    if (labels_one_based.size() != dist.size()) {
        throw input_error("group_summaries_from_distances: one label per object required");
    }
    const std::size_t n = dist.size();
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const int g = labels_one_based[i];
        if (g < 1 || g > k) throw input_error("group_summaries_from_distances: bad label");
        members[static_cast<std::size_t>(g - 1)].push_back(i);
    }
    GroupSummaries out;
    out.approximate_means = true;
    const auto uk = static_cast<std::size_t>(k);
    out.v_hat.assign(uk, 0.0);
    out.sigma_sq.assign(uk, 0.0);
    out.lambda.assign(uk, 0.0);
    out.sizes.assign(uk, 0);
    const auto medoid_of = [&](std::span<const std::size_t> pts) {
        std::size_t best = pts[0];
        double best_sum = std::numeric_limits<double>::infinity();
        for (std::size_t c : pts) {
            double s = 0.0;
            for (std::size_t i : pts) {
                const double d = dist.at(c, i);
                s += d * d;
            }
            if (s < best_sum) {
                best_sum = s;
                best = c;
            }
        }
        return best;
    };
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t pooled_medoid = medoid_of(all);
    out.pooled_mean = {static_cast<double>(pooled_medoid)};
    for (std::size_t i = 0; i < n; ++i) {
        const double d = dist.at(pooled_medoid, i);
        out.v_pooled += d * d;
    }
    out.v_pooled /= static_cast<double>(n);
    for (std::size_t g = 0; g < uk; ++g) {
        if (members[g].size() < 2) {
            throw input_error("group_summaries_from_distances: group " + std::to_string(g + 1) +
                              " has fewer than 2 objects");
        }
        const std::size_t med = medoid_of(members[g]);
        out.group_means.push_back({static_cast<double>(med)});
        const double ng = static_cast<double>(members[g].size());
        double m2 = 0.0, m4 = 0.0;
        for (std::size_t i : members[g]) {
            const double d2 = dist.at(med, i) * dist.at(med, i);
            m2 += d2;
            m4 += d2 * d2;
        }
        m2 /= ng;
        m4 /= ng;
        out.sizes[g] = members[g].size();
        out.lambda[g] = ng / static_cast<double>(n);
        out.v_hat[g] = m2;
        out.sigma_sq[g] = std::max(0.0, m4 - m2 * m2);
        if (out.sigma_sq[g] <= 0.0) {
            throw degenerate_error("group_summaries_from_distances: group " +
                                   std::to_string(g + 1) + " has zero variance estimate");
        }
    }
    return out;
}

}  // namespace frechet
