#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "frechet/frechet.hpp"
#include "frechet/generators.hpp"
#include "frechet/objects.hpp"
#include "frechet/random.hpp"
#include "frechet/special.hpp"

using namespace frechet;

namespace {

ObjectSample euclidean_1d(const std::vector<double>& xs) {
    std::vector<EuclideanPoint> pts;
    for (double x : xs) pts.emplace_back(std::vector<double>{x});
    return ObjectSample::from_points(pts);
}

}  // namespace

TEST_CASE("frechet summary on a degenerate sample") {
    const QuantileDistribution q({0.0, 1.0, 2.0});
    const auto s = frechet_summary(ObjectSample::from_quantiles({q, q, q, q}));
    CHECK(s.variance == 0.0);
    CHECK(s.sigma_sq == 0.0);
    CHECK_FALSE(s.approximate_mean);
}

TEST_CASE("frechet summary hand example in 1-D Euclidean space") {
    const auto s = frechet_summary(euclidean_1d({0.0, 1.0, 2.0}));
    CHECK(s.mean_object[0] == doctest::Approx(1.0));
    CHECK(s.variance == doctest::Approx(2.0 / 3.0));
    CHECK(s.sigma_sq == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("frechet summary translation case in Wasserstein space") {
    const auto a = gaussian_quantile_grid(0.0, 1000);
    const auto b = gaussian_quantile_grid(2.0, 1000);
    const auto s = frechet_summary(ObjectSample::from_quantiles({a, b}));
    // mean grid is the N(1,1) grid; both objects at distance 1 from it
    const auto expected = gaussian_quantile_grid(1.0, 1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        CHECK(s.mean_object[i] == doctest::Approx(expected.values()[i]).epsilon(1e-12));
    }
    CHECK(s.variance == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scale and translation equivariance of the Frechet variance") {
    RandomStream stream(7, 0);
    std::vector<double> xs(40);
    for (auto& x : xs) x = stream.normal();
    const auto base = frechet_summary(euclidean_1d(xs));
    const double a = 2.7, b = -4.0;
    std::vector<double> ys(xs);
    for (auto& y : ys) y = a * y + b;
    const auto scaled = frechet_summary(euclidean_1d(ys));
    CHECK(scaled.variance == doctest::Approx(a * a * base.variance).epsilon(1e-12));
    CHECK(scaled.sigma_sq == doctest::Approx(a * a * a * a * base.sigma_sq).epsilon(1e-12));
}

TEST_CASE("variance interval hand example and edge cases") {
    const auto s = frechet_summary(euclidean_1d({0.0, 1.0, 2.0}));
    const auto ci = variance_interval(s, 0.95);
    const double half = 1.959964 * std::sqrt(2.0 / 9.0) / std::sqrt(3.0);
    CHECK(ci.upper == doctest::Approx(2.0 / 3.0 + half).epsilon(1e-5));
    CHECK(ci.lower == doctest::Approx(std::max(0.0, 2.0 / 3.0 - half)).epsilon(1e-5));

    // interval collapses as level -> 0
    const auto tight = variance_interval(s, 1e-12);
    CHECK(tight.upper - tight.lower < 1e-10);

    CHECK_THROWS_AS(variance_interval(s, 0.0), input_error);
    CHECK_THROWS_AS(variance_interval(s, 1.0), input_error);
    const auto degenerate = frechet_summary(euclidean_1d({1.0, 1.0, 1.0}));
    CHECK_THROWS_AS(variance_interval(degenerate, 0.95), degenerate_error);
}

TEST_CASE("stddev interval formula") {
    FrechetSummary s;
    s.variance = 1.0;
    s.sigma_sq = 2.0;
    s.n = 100;
    const auto ci = stddev_interval(s, 0.95);
    const double half = 1.959964 * std::sqrt(2.0) / 20.0;
    CHECK(ci.lower == doctest::Approx(1.0 - half).epsilon(1e-5));
    CHECK(ci.upper == doctest::Approx(1.0 + half).epsilon(1e-5));
    // center identity: squaring the center recovers V_hat
    CHECK(0.5 * (ci.lower + ci.upper) == doctest::Approx(std::sqrt(s.variance)).epsilon(1e-9));

    s.variance = 0.0;
    CHECK_THROWS_AS(stddev_interval(s, 0.95), degenerate_error);
}

TEST_CASE("asymptotic interval coverage in a Euclidean simulation") {
    // N(0,1) data: V_F = 1, target covered ~95% of the time
    int covered_v = 0, covered_s = 0;
    const int runs = 1000;
    for (int r = 0; r < runs; ++r) {
        RandomStream stream(100, static_cast<std::uint64_t>(r));
        std::vector<double> xs(500);
        for (auto& x : xs) x = stream.normal();
        const auto s = frechet_summary(euclidean_1d(xs));
        const auto civ = variance_interval(s, 0.95);
        if (civ.lower <= 1.0 && 1.0 <= civ.upper) ++covered_v;
        const auto cis = stddev_interval(s, 0.95);
        if (cis.lower <= 1.0 && 1.0 <= cis.upper) ++covered_s;
    }
    CHECK(covered_v / static_cast<double>(runs) == doctest::Approx(0.95).epsilon(0.027));
    CHECK(covered_s / static_cast<double>(runs) == doctest::Approx(0.95).epsilon(0.027));
}

TEST_CASE("bootstrap variance interval") {
    SUBCASE("identical objects make every replicate degenerate") {
        CHECK_THROWS_AS(
            bootstrap_variance_interval(euclidean_1d({2.0, 2.0, 2.0, 2.0}), 0.95, 100, 0, 1),
            resampling_error);
    }
    SUBCASE("deterministic under a fixed seed") {
        RandomStream stream(5, 0);
        std::vector<double> xs(60);
        for (auto& x : xs) x = stream.normal();
        const auto sample = euclidean_1d(xs);
        const auto a = bootstrap_variance_interval(sample, 0.95, 200, 0, 99);
        const auto b = bootstrap_variance_interval(sample, 0.95, 200, 0, 99);
        CHECK(a.lower == b.lower);
        CHECK(a.upper == b.upper);
    }
    SUBCASE("agrees with the asymptotic interval at moderate n") {
        RandomStream stream(8, 0);
        std::vector<double> xs(500);
        for (auto& x : xs) x = stream.normal();
        const auto sample = euclidean_1d(xs);
        const auto boot = bootstrap_variance_interval(sample, 0.95, 500, 0, 11);
        const auto asym = variance_interval(frechet_summary(sample), 0.95);
        const double w_boot = boot.upper - boot.lower;
        const double w_asym = asym.upper - asym.lower;
        CHECK(std::fabs(w_boot - w_asym) / w_asym < 0.2);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(bootstrap_variance_interval(euclidean_1d({0.0, 1.0}), 0.95, 50, 0, 1),
                        input_error);
    }
}

TEST_CASE("medoid summary for a caller-supplied distance table") {
    // three points on a line: 0, 1, 5; medoid is 1
    const std::vector<double> condensed{1.0, 5.0, 4.0};  // (0,1),(0,2),(1,2)
    const DistanceMatrix dist(3, condensed);
    const auto s = frechet_summary_medoid(dist);
    CHECK(s.approximate_mean);
    CHECK(s.mean_object[0] == 1.0);  // index of the medoid
    CHECK(s.variance == doctest::Approx((1.0 + 0.0 + 16.0) / 3.0));
}

TEST_CASE("CLT for the Frechet variance in Euclidean space") {
    // standardized statistic close to N(0,1) in Kolmogorov distance
    const int runs = 1000;
    std::vector<double> stats(runs);
    for (int r = 0; r < runs; ++r) {
        RandomStream stream(300, static_cast<std::uint64_t>(r));
        std::vector<double> xs(500);
        for (auto& x : xs) x = stream.normal();
        const auto s = frechet_summary(euclidean_1d(xs));
        stats[r] = std::sqrt(500.0) * (s.variance - 1.0) / std::sqrt(s.sigma_sq);
    }
    std::sort(stats.begin(), stats.end());
    double ks = 0.0;
    for (int i = 0; i < runs; ++i) {
        const double f = std_normal_cdf(stats[i]);
        ks = std::max(ks, std::fabs(f - static_cast<double>(i) / runs));
        ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / runs - f));
    }
    CHECK(ks < 0.06);
}

TEST_CASE("plugging in the true mean changes the variance estimate by o(1/sqrt(n))") {
    const auto mc_gap = [](std::size_t n) {
        double total = 0.0;
        const int runs = 60;
        for (int r = 0; r < runs; ++r) {
            RandomStream stream(400 + n, static_cast<std::uint64_t>(r));
            std::vector<double> xs(n);
            for (auto& x : xs) x = stream.normal();
            const auto sample = euclidean_1d(xs);
            const auto s = frechet_summary(sample);
            double v_true = 0.0;
            const std::vector<double> origin{0.0};
            for (std::size_t i = 0; i < n; ++i) {
                v_true += sample.squared_distance_to(origin, i);
            }
            v_true /= static_cast<double>(n);
            total += std::fabs(s.variance - v_true) * std::sqrt(static_cast<double>(n));
        }
        return total / runs;
    };
    CHECK(mc_gap(2000) < 0.5 * mc_gap(200));
}
