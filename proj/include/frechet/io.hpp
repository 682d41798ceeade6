#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/errors.hpp"
#include "frechet/ksample.hpp"
#include "frechet/objects.hpp"
#include "frechet/random.hpp"

namespace frechet::io {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

inline bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

inline std::vector<std::vector<double>> read_numeric_rows(const std::string& path,
                                                          bool allow_ragged) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        bool numeric = true;
        for (const std::string& f : detail::split_csv_line(line)) {
            if (f.find_first_not_of(" \t\r") == std::string::npos) continue;
            double v;
            if (!parse_double(f, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first_content_line) {  // header
                first_content_line = false;
                continue;
            }
            throw input_error(path + ": non-numeric value at row " + std::to_string(lineno));
        }
        first_content_line = false;
        if (!rows.empty() && !allow_ragged && row.size() != rows.front().size()) {
            throw input_error(path + ": row " + std::to_string(lineno) +
                              " has a different number of columns");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error(path + ": no data rows");
    return rows;
}

}  // namespace detail

// Quantile-grid CSV: one object per row, M columns; optional header row.
inline std::vector<QuantileDistribution> read_quantile_csv(const std::string& path) {
    std::vector<QuantileDistribution> out;
    for (auto& row : detail::read_numeric_rows(path, false)) {
        try {
            out.emplace_back(std::move(row));
        } catch (const input_error& e) {
            throw input_error(path + ": object " + std::to_string(out.size() + 1) + ": " +
                              e.what());
        }
    }
    return out;
}

// Raw-sample CSV: one object per row, variable-length rows; each row is
// converted to a quantile grid.
inline std::vector<QuantileDistribution> read_raw_sample_csv(const std::string& path,
                                                             std::size_t grid_size) {
    std::vector<QuantileDistribution> out;
    for (const auto& row : detail::read_numeric_rows(path, true)) {
        try {
            out.push_back(empirical_quantile_grid(row, grid_size));
        } catch (const input_error& e) {
            throw input_error(path + ": object " + std::to_string(out.size() + 1) + ": " +
                              e.what());
        }
    }
    return out;
}

inline std::vector<EuclideanPoint> read_vector_csv(const std::string& path) {
    std::vector<EuclideanPoint> out;
    for (auto& row : detail::read_numeric_rows(path, false)) {
        out.emplace_back(std::move(row));
    }
    return out;
}

// One matrix per file: r whitespace-separated rows of r entries.
inline std::vector<double> read_matrix_file(const std::string& path, std::size_t& dim) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        double v;
        while (ss >> v) row.push_back(v);
        if (!ss.eof()) throw input_error(path + ": non-numeric matrix entry");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error(path + ": empty matrix file");
    dim = rows.size();
    std::vector<double> flat;
    flat.reserve(dim * dim);
    for (const auto& row : rows) {
        if (row.size() != dim) {
            throw input_error(path + ": matrix is not square (" + std::to_string(dim) + " rows, " +
                              std::to_string(row.size()) + " columns)");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return flat;
}

// A matrix path is either one file or a directory of matrix files
// (read in sorted filename order).
inline std::vector<SquareMatrixObject> read_matrix_objects(const std::string& path,
                                                           MatrixKind kind) {
    std::vector<std::string> files;
    if (std::filesystem::is_directory(path)) {
        for (const auto& e : std::filesystem::directory_iterator(path)) {
            if (e.is_regular_file()) files.push_back(e.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw input_error(path + ": directory contains no files");
    } else {
        files.push_back(path);
    }
    std::vector<SquareMatrixObject> out;
    for (const auto& f : files) {
        std::size_t dim = 0;
        auto flat = read_matrix_file(f, dim);
        try {
            out.emplace_back(dim, std::move(flat), kind);
        } catch (const input_error& e) {
            throw input_error(f + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<int> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open labels file: " + path);
    std::vector<int> labels;
    int v;
    while (in >> v) labels.push_back(v);
    if (labels.empty()) throw input_error(path + ": no labels");
    return labels;
}

inline nlohmann::json report_to_json(const KSampleReport& r) {
    nlohmann::json j;
    j["groups"] = r.summaries.sizes;
    j["lambda"] = r.summaries.lambda;
    j["v_hat"] = r.summaries.v_hat;
    j["sigma_sq"] = r.summaries.sigma_sq;
    j["v_pooled"] = r.summaries.v_pooled;
    j["f_n"] = r.f_n;
    j["u_n"] = r.u_n;
    j["t_n"] = r.t_n;
    j["df"] = r.df;
    j["p_asymptotic"] = r.p_asymptotic;
    if (r.p_resampled) {
        j["p_resampled"] = *r.p_resampled;
    } else {
        j["p_resampled"] = nullptr;
    }
    j["method"] = to_string(r.method);
    j["replicates"] = r.replicates_used;
    j["discarded_replicates"] = r.discarded_replicates;
    j["seed"] = r.seed;
    j["alpha"] = r.alpha;
    j["reject"] = r.reject;
    j["approximate_means"] = r.summaries.approximate_means;
    j["algorithm_id"] = RandomStream::algorithm_id;
    return j;
}

inline void write_quantile_csv(const std::string& path,
                               const std::vector<QuantileDistribution>& objs) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    out.precision(17);
    for (const auto& q : objs) {
        for (std::size_t i = 0; i < q.values().size(); ++i) {
            if (i) out << ',';
            out << q.values()[i];
        }
        out << '\n';
    }
}

inline void write_matrix_file(const std::string& path, const SquareMatrixObject& m) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    out.precision(17);
    for (std::size_t i = 0; i < m.dimension(); ++i) {
        for (std::size_t j = 0; j < m.dimension(); ++j) {
            if (j) out << ' ';
            out << m.at(i, j);
        }
        out << '\n';
    }
}

}  // namespace frechet::io
