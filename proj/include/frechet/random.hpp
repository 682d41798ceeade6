#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "frechet/errors.hpp"
#include "frechet/special.hpp"

namespace frechet {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// Deterministic random stream. The sequence is a pure function of
// (root_seed, stream_index); distinct indices give independent substreams.
// Engine output is fully specified by the C++ standard (mt19937_64), so
// identical inputs reproduce identical draws on every platform.
class RandomStream {
public:
    static constexpr const char* algorithm_id = "mt19937_64/splitmix64-derived";

    RandomStream(std::uint64_t root_seed, std::uint64_t stream_index)
        : root_seed_(root_seed), stream_index_(stream_index) {
        std::uint64_t s = root_seed ^ 0x51a9d2f3b4c87e60ULL;
        (void)detail::splitmix64(s);
        s ^= stream_index * 0x9e3779b97f4a7c15ULL;
        engine_.seed(detail::splitmix64(s));
    }

    std::uint64_t root_seed() const { return root_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_bits() { return engine_(); }

    // Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Standard normal by quantile inversion: one uniform consumed per draw.
    double normal() { return std_normal_quantile(uniform()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Uniform integer in [0, n); unbiased via rejection on the top range.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw input_error("uniform_index: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the shape<1 power boost.
    double gamma(double shape) {
        if (shape <= 0.0) throw input_error("gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_square(double df) { return 2.0 * gamma(0.5 * df); }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    double student_t(double df) { return normal() / std::sqrt(chi_square(df) / df); }

private:
    std::uint64_t root_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

// Stable stream index from structured coordinates plus an optional tag, so
// adding a new consumer never perturbs the streams of existing ones.
inline std::uint64_t stream_index_of(std::uint64_t a, std::uint64_t b, std::string_view tag = {}) {
    std::uint64_t s = a * 0x9e3779b97f4a7c15ULL + b;
    s ^= detail::fnv1a64(tag);
    return detail::splitmix64(s);
}

inline RandomStream derive_stream(std::uint64_t root_seed, std::uint64_t stream_index) {
    return RandomStream(root_seed, stream_index);
}

}  // namespace frechet
