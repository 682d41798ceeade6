#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "frechet/errors.hpp"
#include "frechet/objects.hpp"
#include "frechet/random.hpp"
#include "frechet/special.hpp"

namespace frechet {

// Exact quantile grid of N(mu, 1) on the midpoint grid.
inline QuantileDistribution gaussian_quantile_grid(double mu, std::size_t grid_size,
                                                   double sd = 1.0) {
    std::vector<double> values(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        values[i] = mu + sd * std_normal_quantile(p);
    }
    return QuantileDistribution(std::move(values));
}

// Random N(mu_i, 1) distribution objects with mu_i ~ N(mu_mean, mu_sd^2).
// Grids are analytic, not estimated from draws.
inline ObjectSample gen_gaussian_qd_sample(std::size_t n, double mu_mean, double mu_sd,
                                           std::size_t grid_size, RandomStream& stream) {
    if (mu_sd < 0.0) throw input_error("gen_gaussian_qd_sample: mu_sd must be >= 0");
    if (grid_size < 2) throw input_error("gen_gaussian_qd_sample: grid size must be >= 2");
    std::vector<double> base(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        base[i] = std_normal_quantile(p);
    }
    std::vector<QuantileDistribution> objs;
    objs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = stream.normal(mu_mean, mu_sd);
        std::vector<double> values(grid_size);
        for (std::size_t t = 0; t < grid_size; ++t) values[t] = mu + base[t];
        objs.emplace_back(std::move(values));
    }
    return ObjectSample::from_quantiles(objs);
}

namespace detail {

// One preferential-attachment graph with initial attractiveness a, giving
// theoretical degree-tail exponent 3 + a/edges_per_step. Seeded with a
// connected clique on edges_per_step+1 nodes, so the graph stays connected
// and simple. Returns the adjacency matrix.
inline std::vector<double> ba_adjacency(std::size_t nodes, double attractiveness,
                                        std::size_t edges_per_step, RandomStream& stream) {
    const std::size_t m = edges_per_step;
    std::vector<double> w(nodes * nodes, 0.0);
    std::vector<double> degree(nodes, 0.0);
    const auto add_edge = [&](std::size_t i, std::size_t j) {
        w[i * nodes + j] = 1.0;
        w[j * nodes + i] = 1.0;
        degree[i] += 1.0;
        degree[j] += 1.0;
    };
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t j = i + 1; j <= m; ++j) add_edge(i, j);
    }
    std::vector<double> weight(nodes, 0.0);
    for (std::size_t v = m + 1; v < nodes; ++v) {
        // attachment weight degree + a, floored to stay positive at the
        // boundary exponent where degree + a can reach zero
        for (std::size_t u = 0; u < v; ++u) {
            weight[u] = std::max(degree[u] + attractiveness, 1e-6);
        }
        for (std::size_t e = 0; e < m; ++e) {
            double total = 0.0;
            for (std::size_t u = 0; u < v; ++u) total += weight[u];
            double r = stream.uniform() * total;
            std::size_t pick = v - 1;
            for (std::size_t u = 0; u < v; ++u) {
                r -= weight[u];
                if (r <= 0.0) {
                    pick = u;
                    break;
                }
            }
            add_edge(v, pick);
            weight[pick] = 0.0;  // no multi-edges
        }
    }
    return w;
}

}  // namespace detail

// Sample of graph Laplacians of scale-free preferential-attachment networks
// with target degree-tail exponent gamma.
inline ObjectSample gen_ba_laplacian_sample(std::size_t n, std::size_t nodes, double gamma,
                                            std::size_t edges_per_step, RandomStream& stream) {
    if (nodes < 3) throw input_error("gen_ba_laplacian_sample: need at least 3 nodes");
    if (edges_per_step < 1) throw input_error("gen_ba_laplacian_sample: edges_per_step >= 1");
    if (nodes < edges_per_step + 2) {
        throw input_error("gen_ba_laplacian_sample: need nodes >= edges_per_step + 2");
    }
    if (!(gamma >= 2.0 && gamma <= 3.5)) {
        throw input_error("gen_ba_laplacian_sample: gamma must lie in [2, 3.5]");
    }
    const double attractiveness = (gamma - 3.0) * static_cast<double>(edges_per_step);
    std::vector<SquareMatrixObject> objs;
    objs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        objs.push_back(laplacian_from_adjacency(
            detail::ba_adjacency(nodes, attractiveness, edges_per_step, stream), nodes));
    }
    return ObjectSample::from_matrices(objs);
}

// Multivariate N(0, I) or t_df(0, I) vectors truncated to the box
// [-bound, bound]^dim by rejection. df = 0 selects the normal case.
inline ObjectSample gen_truncated_mvt_sample(std::size_t n, std::size_t dim, double df,
                                             double bound, RandomStream& stream) {
    if (dim < 1) throw input_error("gen_truncated_mvt_sample: dim must be >= 1");
    if (!(bound > 0.0)) throw input_error("gen_truncated_mvt_sample: bound must be positive");
    if (df < 0.0) throw input_error("gen_truncated_mvt_sample: df must be >= 0");
    std::vector<EuclideanPoint> objs;
    objs.reserve(n);
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (;;) {
            if (df == 0.0) {
                for (std::size_t t = 0; t < dim; ++t) x[t] = stream.normal();
            } else {
                const double scale = std::sqrt(df / stream.chi_square(df));
                for (std::size_t t = 0; t < dim; ++t) x[t] = stream.normal() * scale;
            }
            bool inside = true;
            for (std::size_t t = 0; t < dim; ++t) {
                if (std::fabs(x[t]) > bound) {
                    inside = false;
                    break;
                }
            }
            if (inside) break;
        }
        objs.emplace_back(x);
    }
    return ObjectSample::from_points(objs);
}

// Vectors with independent Beta(beta, beta) coordinates.
inline ObjectSample gen_beta_vector_sample(std::size_t n, std::size_t dim, double beta,
                                           RandomStream& stream) {
    if (dim < 1) throw input_error("gen_beta_vector_sample: dim must be >= 1");
    if (!(beta > 0.0)) throw input_error("gen_beta_vector_sample: beta must be positive");
    std::vector<EuclideanPoint> objs;
    objs.reserve(n);
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < dim; ++t) x[t] = stream.beta(beta, beta);
        objs.emplace_back(x);
    }
    return ObjectSample::from_points(objs);
}

}  // namespace frechet
