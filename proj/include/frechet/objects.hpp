#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/errors.hpp"

namespace frechet {

enum class Space { Wasserstein, Frobenius, Euclidean };

enum class MatrixKind { Laplacian, Correlation, Symmetric };

inline const char* to_string(Space s) {
    switch (s) {
        case Space::Wasserstein: return "wasserstein";
        case Space::Frobenius: return "frobenius";
        case Space::Euclidean: return "euclidean";
    }
    return "?";
}

namespace detail {

inline void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw input_error(std::string(what) + ": non-finite value");
    }
}

// Smallest eigenvalue of a symmetric matrix by Jacobi rotations.
// Only used in validation; dimensions here are small.
inline double min_symmetric_eigenvalue(std::span<const double> a_in, std::size_t r) {
    std::vector<double> a(a_in.begin(), a_in.end());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = p + 1; q < r; ++q) off += a[p * r + q] * a[p * r + q];
        if (off < 1e-22) break;
        for (std::size_t p = 0; p < r; ++p) {
            for (std::size_t q = p + 1; q < r; ++q) {
                const double apq = a[p * r + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a[q * r + q] - a[p * r + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < r; ++i) {
                    const double aip = a[i * r + p];
                    const double aiq = a[i * r + q];
                    a[i * r + p] = c * aip - s * aiq;
                    a[i * r + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < r; ++i) {
                    const double api = a[p * r + i];
                    const double aqi = a[q * r + i];
                    a[p * r + i] = c * api - s * aqi;
                    a[q * r + i] = s * api + c * aqi;
                }
            }
        }
    }
    double mn = a[0];
    for (std::size_t i = 1; i < r; ++i) mn = std::min(mn, a[i * r + i]);
    return mn;
}

}  // namespace detail

// A 1-D probability distribution represented by its quantile function sampled
// on the midpoint grid (i+0.5)/M, i = 0..M-1.
class QuantileDistribution {
public:
    explicit QuantileDistribution(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2) throw input_error("QuantileDistribution: grid size must be >= 2");
        detail::require_finite(values_, "QuantileDistribution");
        for (std::size_t i = 1; i < values_.size(); ++i) {
            if (values_[i] < values_[i - 1]) {
                throw input_error("QuantileDistribution: values must be non-decreasing (index " +
                                  std::to_string(i) + ")");
            }
        }
    }

    std::size_t grid_size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

// An r x r real matrix object under the Frobenius metric, tagged with the
// constraint set it lives in. Validation happens here, never in distance loops.
class SquareMatrixObject {
public:
    SquareMatrixObject(std::size_t dimension, std::vector<double> entries, MatrixKind kind)
        : dim_(dimension), entries_(std::move(entries)), kind_(kind) {
        if (dim_ < 1 || entries_.size() != dim_ * dim_) {
            throw input_error("SquareMatrixObject: entry count does not match dimension");
        }
        detail::require_finite(entries_, "SquareMatrixObject");
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i + 1; j < dim_; ++j) {
                const double eij = entries_[i * dim_ + j];
                const double eji = entries_[j * dim_ + i];
                if (std::fabs(eij - eji) > 1e-12 * std::max(1.0, std::fabs(eij))) {
                    throw input_error("SquareMatrixObject: not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
        }
        if (kind_ == MatrixKind::Laplacian) validate_laplacian();
        if (kind_ == MatrixKind::Correlation) validate_correlation();
    }

    std::size_t dimension() const { return dim_; }
    const std::vector<double>& entries() const { return entries_; }
    MatrixKind kind() const { return kind_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

private:
    void validate_laplacian() const {
        for (std::size_t i = 0; i < dim_; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                row += entries_[i * dim_ + j];
                if (i != j && entries_[i * dim_ + j] > 0.0) {
                    throw input_error("Laplacian: positive off-diagonal at row " +
                                      std::to_string(i));
                }
            }
            if (std::fabs(row) > 1e-10) {
                throw input_error("Laplacian: row " + std::to_string(i) +
                                  " does not sum to zero");
            }
        }
    }

    void validate_correlation() const {
        for (std::size_t i = 0; i < dim_; ++i) {
            if (std::fabs(entries_[i * dim_ + i] - 1.0) > 1e-10) {
                throw input_error("Correlation: diagonal entry " + std::to_string(i) +
                                  " is not 1");
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                if (i != j && std::fabs(entries_[i * dim_ + j]) > 1.0 + 1e-12) {
                    throw input_error("Correlation: off-diagonal outside [-1,1]");
                }
            }
        }
        if (detail::min_symmetric_eigenvalue(entries_, dim_) < -1e-8) {
            throw input_error("Correlation: matrix is not positive semidefinite");
        }
    }

    std::size_t dim_;
    std::vector<double> entries_;
    MatrixKind kind_;
};

class EuclideanPoint {
public:
    explicit EuclideanPoint(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw input_error("EuclideanPoint: dimension must be >= 1");
        detail::require_finite(coords_, "EuclideanPoint");
    }

    std::size_t dimension() const { return coords_.size(); }
    const std::vector<double>& coords() const { return coords_; }

private:
    std::vector<double> coords_;
};

// Homogeneous collection of metric objects, stored flat (one row per object).
// All three built-in metrics reduce to a weighted Euclidean norm on the rows:
// weight 1/M for quantile grids (midpoint quadrature of the L2-Wasserstein
// integral), weight 1 for the Frobenius and Euclidean spaces.
class ObjectSample {
public:
    static ObjectSample from_quantiles(const std::vector<QuantileDistribution>& objs) {
        if (objs.empty()) throw input_error("ObjectSample: sample must be non-empty");
        const std::size_t m = objs.front().grid_size();
        ObjectSample s(Space::Wasserstein, m, m, MatrixKind::Symmetric, objs.size());
        for (std::size_t i = 0; i < objs.size(); ++i) {
            if (objs[i].grid_size() != m) {
                throw dimension_error("ObjectSample: quantile grid size mismatch at object " +
                                      std::to_string(i));
            }
            std::copy(objs[i].values().begin(), objs[i].values().end(),
                      s.data_.begin() + static_cast<std::ptrdiff_t>(i * m));
        }
        return s;
    }

    static ObjectSample from_matrices(const std::vector<SquareMatrixObject>& objs) {
        if (objs.empty()) throw input_error("ObjectSample: sample must be non-empty");
        const std::size_t r = objs.front().dimension();
        const MatrixKind kind = objs.front().kind();
        ObjectSample s(Space::Frobenius, r * r, r, kind, objs.size());
        for (std::size_t i = 0; i < objs.size(); ++i) {
            if (objs[i].dimension() != r) {
                throw dimension_error("ObjectSample: matrix dimension mismatch at object " +
                                      std::to_string(i));
            }
            if (objs[i].kind() != kind) {
                throw input_error("ObjectSample: mixed matrix kinds at object " +
                                  std::to_string(i));
            }
            std::copy(objs[i].entries().begin(), objs[i].entries().end(),
                      s.data_.begin() + static_cast<std::ptrdiff_t>(i * r * r));
        }
        return s;
    }

    static ObjectSample from_points(const std::vector<EuclideanPoint>& objs) {
        if (objs.empty()) throw input_error("ObjectSample: sample must be non-empty");
        const std::size_t d = objs.front().dimension();
        ObjectSample s(Space::Euclidean, d, d, MatrixKind::Symmetric, objs.size());
        for (std::size_t i = 0; i < objs.size(); ++i) {
            if (objs[i].dimension() != d) {
                throw dimension_error("ObjectSample: point dimension mismatch at object " +
                                      std::to_string(i));
            }
            std::copy(objs[i].coords().begin(), objs[i].coords().end(),
                      s.data_.begin() + static_cast<std::ptrdiff_t>(i * d));
        }
        return s;
    }

    Space space() const { return space_; }
    std::size_t size() const { return n_; }
    std::size_t object_length() const { return len_; }
    // Grid size, matrix dimension or point dimension, depending on the space.
    std::size_t extent() const { return extent_; }
    MatrixKind matrix_kind() const { return kind_; }
    double metric_weight() const {
        return space_ == Space::Wasserstein ? 1.0 / static_cast<double>(extent_) : 1.0;
    }

    std::span<const double> object(std::size_t i) const {
        return {data_.data() + i * len_, len_};
    }

    double squared_distance(std::size_t i, std::size_t j) const {
        return squared_distance_to(object(j), i);
    }

    double squared_distance_to(std::span<const double> ref, std::size_t i) const {
        const double* a = data_.data() + i * len_;
        double s = 0.0;
        for (std::size_t t = 0; t < len_; ++t) {
            const double d = a[t] - ref[t];
            s += d * d;
        }
        return s * metric_weight();
    }

    // Concatenation of homogeneous samples, preserving object order.
    static ObjectSample concat(const ObjectSample& a, const ObjectSample& b) {
        if (a.space_ != b.space_ || a.len_ != b.len_ || a.kind_ != b.kind_) {
            throw dimension_error("ObjectSample::concat: incompatible samples");
        }
        ObjectSample s(a.space_, a.len_, a.extent_, a.kind_, a.n_ + b.n_);
        std::copy(a.data_.begin(), a.data_.end(), s.data_.begin());
        std::copy(b.data_.begin(), b.data_.end(),
                  s.data_.begin() + static_cast<std::ptrdiff_t>(a.data_.size()));
        return s;
    }

    // Subsample by index list (with or without repetition).
    ObjectSample subsample(std::span<const std::size_t> idx) const {
        if (idx.empty()) throw input_error("ObjectSample: empty subsample");
        ObjectSample s(space_, len_, extent_, kind_, idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[i] * len_), len_,
                        s.data_.begin() + static_cast<std::ptrdiff_t>(i * len_));
        }
        return s;
    }

private:
    ObjectSample(Space space, std::size_t len, std::size_t extent, MatrixKind kind, std::size_t n)
        : space_(space), len_(len), extent_(extent), kind_(kind), n_(n), data_(n * len, 0.0) {}

    Space space_;
    std::size_t len_;
    std::size_t extent_;
    MatrixKind kind_;
    std::size_t n_;
    std::vector<double> data_;
};

// L2-Wasserstein distance between two quantile grids: the midpoint-rule
// discretization of the squared quantile-difference integral, square-rooted.
inline double wasserstein_distance(const QuantileDistribution& a, const QuantileDistribution& b) {
    if (a.grid_size() != b.grid_size()) {
        throw dimension_error("wasserstein_distance: grid sizes differ (" +
                              std::to_string(a.grid_size()) + " vs " +
                              std::to_string(b.grid_size()) + ")");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.grid_size(); ++i) {
        const double d = a.values()[i] - b.values()[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.grid_size()));
}

inline double frobenius_distance(const SquareMatrixObject& a, const SquareMatrixObject& b) {
    if (a.dimension() != b.dimension()) {
        throw dimension_error("frobenius_distance: matrix dimensions differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        const double d = a.entries()[i] - b.entries()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double euclidean_distance(const EuclideanPoint& a, const EuclideanPoint& b) {
    if (a.dimension() != b.dimension()) {
        throw dimension_error("euclidean_distance: point dimensions differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const double d = a.coords()[i] - b.coords()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Empirical quantile grid from raw observations: linear interpolation between
// order statistics at plotting positions (j-0.5)/n, constant beyond the
// extremes. The output lands on the midpoint grid (i+0.5)/M.
inline QuantileDistribution empirical_quantile_grid(std::span<const double> raw_samples,
                                                    std::size_t grid_size) {
    if (raw_samples.size() < 2) {
        throw input_error("empirical_quantile_grid: need at least 2 samples");
    }
    if (grid_size < 2) throw input_error("empirical_quantile_grid: grid size must be >= 2");
    detail::require_finite(raw_samples, "empirical_quantile_grid");
    std::vector<double> sorted(raw_samples.begin(), raw_samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> values(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
        const double pos = p * static_cast<double>(n) - 0.5;  // index on the (j-0.5)/n scale
        if (pos <= 0.0) {
            values[i] = sorted.front();
        } else if (pos >= static_cast<double>(n - 1)) {
            values[i] = sorted.back();
        } else {
            const auto j = static_cast<std::size_t>(pos);
            const double frac = pos - static_cast<double>(j);
            values[i] = sorted[j] * (1.0 - frac) + sorted[j + 1] * frac;
        }
    }
    return QuantileDistribution(std::move(values));
}

// Graph Laplacian L = D - W from a non-negative symmetric adjacency matrix
// with zero diagonal.
inline SquareMatrixObject laplacian_from_adjacency(const std::vector<double>& w, std::size_t r) {
    if (r < 1 || w.size() != r * r) {
        throw input_error("laplacian_from_adjacency: entry count does not match dimension");
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (w[i * r + i] != 0.0) {
            throw input_error("laplacian_from_adjacency: nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = 0; j < r; ++j) {
            if (!(w[i * r + j] >= 0.0)) {
                throw input_error("laplacian_from_adjacency: negative or non-finite weight at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (std::fabs(w[i * r + j] - w[j * r + i]) > 1e-12 * std::max(1.0, w[i * r + j])) {
                throw input_error("laplacian_from_adjacency: asymmetric weights at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    std::vector<double> l(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < r; ++j) {
            deg += w[i * r + j];
            if (i != j) l[i * r + j] = -w[i * r + j];
        }
        l[i * r + i] = deg;
    }
    return SquareMatrixObject(r, std::move(l), MatrixKind::Laplacian);
}

// Closed-form Fréchet mean of a sample, valid in all three built-in spaces:
// the pointwise/entrywise/coordinatewise average. Convexity of the quantile,
// Laplacian and correlation constraint sets keeps the average inside them.
inline std::vector<double> closed_form_mean(const ObjectSample& sample) {
    const std::size_t len = sample.object_length();
    std::vector<double> mean(len, 0.0);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto obj = sample.object(i);
        for (std::size_t t = 0; t < len; ++t) mean[t] += obj[t];
    }
    const double inv = 1.0 / static_cast<double>(sample.size());
    for (double& m : mean) m *= inv;
    return mean;
}

}  // namespace frechet
