#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frechet/special.hpp"

using namespace frechet;

TEST_CASE("chi-square survival function boundaries") {
    for (int df : {1, 2, 3, 10}) {
        CHECK(chi_square_sf(0.0, df) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(chi_square_sf(-0.1, 2), input_error);
    CHECK_THROWS_AS(chi_square_sf(1.0, 0), input_error);
}

TEST_CASE("chi-square sf matches closed form at df = 2") {
    // sf(x, 2) = exp(-x/2)
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 5.991465, 10.0, 20.0}) {
        CHECK(chi_square_sf(x, 2) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-10));
    }
    CHECK(chi_square_sf(5.991465, 2) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("chi-square sf matches the normal identity at df = 1") {
    // sf(x, 1) = 2 (1 - Phi(sqrt(x)))
    for (double x : {0.2, 1.0, 2.0, 3.841459, 9.0}) {
        const double oracle = 2.0 * (1.0 - std_normal_cdf(std::sqrt(x)));
        CHECK(chi_square_sf(x, 1) == doctest::Approx(oracle).epsilon(1e-10));
    }
    CHECK(chi_square_sf(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("chi-square sf is monotone non-increasing in x") {
    for (int df : {1, 2, 5, 20}) {
        double prev = 1.0;
        for (double x = 0.0; x < 50.0; x += 0.25) {
            const double s = chi_square_sf(x, df);
            CHECK(s <= prev + 1e-14);
            prev = s;
        }
    }
}

TEST_CASE("chi-square quantile closed forms") {
    CHECK(chi_square_quantile(0.95, 2) == doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-6));
    CHECK(chi_square_quantile(0.95, 2) == doctest::Approx(5.991465).epsilon(1e-6));
    CHECK(chi_square_quantile(0.95, 1) == doctest::Approx(3.841459).epsilon(1e-5));
    CHECK_THROWS_AS(chi_square_quantile(0.0, 2), input_error);
    CHECK_THROWS_AS(chi_square_quantile(1.0, 2), input_error);
}

TEST_CASE("chi-square sf/quantile round trip") {
    for (int df : {1, 2, 3, 7, 15}) {
        for (double p : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
            const double q = chi_square_quantile(p, df);
            CHECK(chi_square_sf(q, df) == doctest::Approx(1.0 - p).epsilon(1e-8));
        }
    }
}

TEST_CASE("standard normal quantile") {
    CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK_THROWS_AS(std_normal_quantile(0.0), input_error);
    CHECK_THROWS_AS(std_normal_quantile(1.0), input_error);
    for (double p = 0.01; p < 1.0; p += 0.01) {
        CHECK(std_normal_cdf(std_normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
        // antisymmetry
        CHECK(std_normal_quantile(p) == doctest::Approx(-std_normal_quantile(1.0 - p)).epsilon(1e-9));
    }
    // strictly increasing on a fine grid
    double prev = std_normal_quantile(1e-6);
    for (double p = 1e-5; p < 1.0; p += 1e-3) {
        const double q = std_normal_quantile(p);
        CHECK(q > prev);
        prev = q;
    }
}
