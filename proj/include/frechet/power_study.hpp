#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/baselines.hpp"
#include "frechet/errors.hpp"
#include "frechet/generators.hpp"
#include "frechet/ksample.hpp"
#include "frechet/random.hpp"

namespace frechet {

enum class ScenarioKind {
    DistributionLocation,  // N(mu,1) objects, mu ~ N(0,v) vs N(delta,v)
    DistributionScale,     // N(mu,1) objects, mu ~ N(0,v) vs N(0,v*r)
    BANetwork,             // scale-free graph Laplacians, gamma_null vs gamma
    TruncatedMVT,          // truncated normal vs truncated t_m
    BetaVector             // Beta(1,1) vs Beta(beta,beta) coordinates
};

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::DistributionLocation: return "location";
        case ScenarioKind::DistributionScale: return "scale";
        case ScenarioKind::BANetwork: return "network";
        case ScenarioKind::TruncatedMVT: return "tmvt";
        case ScenarioKind::BetaVector: return "beta";
    }
    return "?";
}

inline ScenarioKind scenario_from_string(const std::string& s) {
    if (s == "location") return ScenarioKind::DistributionLocation;
    if (s == "scale") return ScenarioKind::DistributionScale;
    if (s == "network") return ScenarioKind::BANetwork;
    if (s == "tmvt") return ScenarioKind::TruncatedMVT;
    if (s == "beta") return ScenarioKind::BetaVector;
    throw input_error("unknown scenario: " + s);
}

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::DistributionLocation;
    std::size_t grid_size = 100;     // Wasserstein scenarios
    double mu_var_null = 0.5;        // location: Var(mu) in both groups
    double mu_var_base = 0.2;        // scale: Var(mu) in group 1
    std::size_t nodes = 10;          // network
    std::size_t edges_per_step = 1;  // network
    double gamma_null = 2.5;         // network: group-1 exponent
    std::size_t dim = 5;             // Euclidean scenarios
    double bound = 5.0;              // tmvt truncation

    // The grid value at which the two groups share one distribution.
    double null_parameter() const {
        switch (kind) {
            case ScenarioKind::DistributionLocation: return 0.0;
            case ScenarioKind::DistributionScale: return 1.0;
            case ScenarioKind::BANetwork: return gamma_null;
            case ScenarioKind::TruncatedMVT: return 0.0;  // df 0 = the normal reference
            case ScenarioKind::BetaVector: return 1.0;
        }
        return 0.0;
    }
};

struct StudyConfig {
    ScenarioSpec scenario;
    std::vector<double> grid;
    std::vector<std::size_t> group_sizes{100, 100};
    std::vector<std::string> tests{"tn_permutation"};
    double alpha = 0.05;
    std::size_t monte_carlo_runs = 200;
    std::size_t replicates = 199;
    std::uint64_t seed = 1;
    std::string output;  // CSV path; empty = in-memory only
};

struct PowerCell {
    std::string scenario;
    double param = 0.0;
    std::string test;
    std::size_t n_runs = 0;  // usable runs (errors excluded)
    std::size_t rejections = 0;
    std::size_t errors = 0;
    double rate = 0.0;
    double se = 0.0;
};

struct PowerCurve {
    std::vector<PowerCell> cells;
};

inline StudyConfig study_config_from_json(const nlohmann::json& j) {
    StudyConfig c;
    c.scenario.kind = scenario_from_string(j.at("scenario").get<std::string>());
    c.grid = j.at("grid").get<std::vector<double>>();
    if (c.grid.empty()) throw input_error("study config: grid must be non-empty");
    if (j.contains("group_sizes")) c.group_sizes = j["group_sizes"].get<std::vector<std::size_t>>();
    if (c.group_sizes.size() != 2) throw input_error("study config: need exactly 2 group sizes");
    if (j.contains("tests")) c.tests = j["tests"].get<std::vector<std::string>>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw input_error("study config: alpha in (0,1)");
    if (j.contains("monte_carlo_runs")) c.monte_carlo_runs = j["monte_carlo_runs"].get<std::size_t>();
    if (c.monte_carlo_runs < 1) throw input_error("study config: monte_carlo_runs >= 1");
    if (j.contains("replicates")) c.replicates = j["replicates"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("grid_size")) c.scenario.grid_size = j["grid_size"].get<std::size_t>();
    if (j.contains("mu_var_null")) c.scenario.mu_var_null = j["mu_var_null"].get<double>();
    if (j.contains("mu_var_base")) c.scenario.mu_var_base = j["mu_var_base"].get<double>();
    if (j.contains("nodes")) c.scenario.nodes = j["nodes"].get<std::size_t>();
    if (j.contains("edges_per_step")) c.scenario.edges_per_step = j["edges_per_step"].get<std::size_t>();
    if (j.contains("gamma_null")) c.scenario.gamma_null = j["gamma_null"].get<double>();
    if (j.contains("dim")) c.scenario.dim = j["dim"].get<std::size_t>();
    if (j.contains("bound")) c.scenario.bound = j["bound"].get<double>();
    static const std::vector<std::string> known{"tn_asymptotic", "tn_permutation", "tn_bootstrap",
                                               "energy", "mmd"};
    for (const auto& t : c.tests) {
        if (std::find(known.begin(), known.end(), t) == known.end()) {
            throw input_error("study config: unknown test: " + t);
        }
    }
    return c;
}

inline nlohmann::json study_config_to_json(const StudyConfig& c) {
    nlohmann::json j;
    j["scenario"] = to_string(c.scenario.kind);
    j["grid"] = c.grid;
    j["group_sizes"] = c.group_sizes;
    j["tests"] = c.tests;
    j["alpha"] = c.alpha;
    j["monte_carlo_runs"] = c.monte_carlo_runs;
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["grid_size"] = c.scenario.grid_size;
    j["mu_var_null"] = c.scenario.mu_var_null;
    j["mu_var_base"] = c.scenario.mu_var_base;
    j["nodes"] = c.scenario.nodes;
    j["edges_per_step"] = c.scenario.edges_per_step;
    j["gamma_null"] = c.scenario.gamma_null;
    j["dim"] = c.scenario.dim;
    j["bound"] = c.scenario.bound;
    j["algorithm_id"] = RandomStream::algorithm_id;
    return j;
}

// One two-group dataset for a scenario at grid value `param`.
inline GroupedSample generate_scenario_dataset(const ScenarioSpec& sp, double param,
                                               std::size_t n1, std::size_t n2,
                                               RandomStream& stream) {
    ObjectSample g1 = [&] {
        switch (sp.kind) {
            case ScenarioKind::DistributionLocation:
                return gen_gaussian_qd_sample(n1, 0.0, std::sqrt(sp.mu_var_null), sp.grid_size,
                                              stream);
            case ScenarioKind::DistributionScale:
                return gen_gaussian_qd_sample(n1, 0.0, std::sqrt(sp.mu_var_base), sp.grid_size,
                                              stream);
            case ScenarioKind::BANetwork:
                return gen_ba_laplacian_sample(n1, sp.nodes, sp.gamma_null, sp.edges_per_step,
                                               stream);
            case ScenarioKind::TruncatedMVT:
                return gen_truncated_mvt_sample(n1, sp.dim, 0.0, sp.bound, stream);
            case ScenarioKind::BetaVector:
                return gen_beta_vector_sample(n1, sp.dim, 1.0, stream);
        }
        throw input_error("generate_scenario_dataset: bad scenario");
    }();
    ObjectSample g2 = [&] {
        switch (sp.kind) {
            case ScenarioKind::DistributionLocation:
                return gen_gaussian_qd_sample(n2, param, std::sqrt(sp.mu_var_null), sp.grid_size,
                                              stream);
            case ScenarioKind::DistributionScale:
                if (!(param > 0.0)) throw input_error("scale scenario: r must be positive");
                return gen_gaussian_qd_sample(n2, 0.0, std::sqrt(sp.mu_var_base * param),
                                              sp.grid_size, stream);
            case ScenarioKind::BANetwork:
                return gen_ba_laplacian_sample(n2, sp.nodes, param, sp.edges_per_step, stream);
            case ScenarioKind::TruncatedMVT:
                return gen_truncated_mvt_sample(n2, sp.dim, param, sp.bound, stream);
            case ScenarioKind::BetaVector:
                return gen_beta_vector_sample(n2, sp.dim, param, stream);
        }
        throw input_error("generate_scenario_dataset: bad scenario");
    }();
    std::vector<int> labels(n1 + n2, 1);
    for (std::size_t i = n1; i < n1 + n2; ++i) labels[i] = 2;
    return GroupedSample(ObjectSample::concat(g1, g2), std::move(labels), 2);
}

namespace detail {

// Root seed for one (grid point, run, test) cell. Derived per cell, so adding
// a test or grid point never perturbs the randomness of the others.
inline std::uint64_t cell_seed(std::uint64_t root, std::size_t grid_index, std::size_t run,
                               const std::string& test) {
    return root ^ stream_index_of(grid_index, run, test);
}

// Rejection decision of one test on one dataset.
inline bool run_one_test(const std::string& test, const GroupedSample& data, double alpha,
                         std::size_t replicates, std::uint64_t seed) {
    if (test == "tn_asymptotic") return asymptotic_test(data, alpha).reject;
    if (test == "tn_permutation") {
        return *permutation_test(data, replicates, seed, alpha).p_resampled <= alpha;
    }
    if (test == "tn_bootstrap") {
        return *bootstrap_test(data, replicates, seed, alpha).p_resampled <= alpha;
    }
    if (test == "energy") return energy_test(data, replicates, seed).p_value <= alpha;
    if (test == "mmd") return mmd_test(data, replicates, seed).p_value <= alpha;
    throw input_error("run_one_test: unknown test: " + test);
}

}  // namespace detail

// Rejection decision for one cell, reproducible in isolation: the dataset and
// the test's resampling both come from the cell seed.
inline bool power_study_cell_decision(const StudyConfig& c, std::size_t grid_index,
                                      std::size_t run, const std::string& test) {
    const std::uint64_t seed = detail::cell_seed(c.seed, grid_index, run, test);
    RandomStream gen_stream(seed, stream_index_of(0, 0, "scenario-data"));
    const GroupedSample data = generate_scenario_dataset(
        c.scenario, c.grid[grid_index], c.group_sizes[0], c.group_sizes[1], gen_stream);
    return detail::run_one_test(test, data, c.alpha, c.replicates, seed);
}

inline PowerCurve run_power_study(const StudyConfig& c) {
    std::ofstream csv;
    if (!c.output.empty()) {
        csv.open(c.output);
        if (!csv) throw input_error("run_power_study: cannot write " + c.output);
        csv << "scenario,param,test,n_runs,rejections,errors,rate,se\n";
        std::ofstream meta(c.output + ".meta.json");
        if (meta) meta << study_config_to_json(c).dump(2) << '\n';
    }
    PowerCurve curve;
    for (std::size_t gi = 0; gi < c.grid.size(); ++gi) {
        for (const auto& test : c.tests) {
            PowerCell cell;
            cell.scenario = to_string(c.scenario.kind);
            cell.param = c.grid[gi];
            cell.test = test;
            for (std::size_t run = 0; run < c.monte_carlo_runs; ++run) {
                try {
                    if (power_study_cell_decision(c, gi, run, test)) ++cell.rejections;
                    ++cell.n_runs;
                } catch (const std::exception&) {
                    ++cell.errors;
                }
            }
            if (cell.n_runs > 0) {
                cell.rate = static_cast<double>(cell.rejections) / static_cast<double>(cell.n_runs);
                cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) /
                                    static_cast<double>(cell.n_runs));
            }
            if (csv.is_open()) {
                csv << cell.scenario << ',' << cell.param << ',' << cell.test << ','
                    << cell.n_runs << ',' << cell.rejections << ',' << cell.errors << ','
                    << cell.rate << ',' << cell.se << '\n';
                csv.flush();  // partial results survive interruption
            }
            curve.cells.push_back(std::move(cell));
        }
    }
    return curve;
}

struct SizeCell {
    std::string test;
    double size = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    std::size_t n_runs = 0;
};

// Size table from the null points of the grid, with a binomial 95% CI per cell.
inline std::vector<SizeCell> empirical_size_report(const StudyConfig& config) {
    const double null_param = config.scenario.null_parameter();
    StudyConfig c = config;
    c.grid.clear();
    c.output.clear();
    std::vector<std::size_t> kept;
    for (std::size_t gi = 0; gi < config.grid.size(); ++gi) {
        if (std::fabs(config.grid[gi] - null_param) < 1e-12) {
            kept.push_back(gi);
            c.grid.push_back(config.grid[gi]);
        }
    }
    if (c.grid.empty()) {
        throw input_error("empirical_size_report: grid contains no null points (expected " +
                          std::to_string(null_param) + ")");
    }
    std::vector<SizeCell> out;
    for (const auto& test : c.tests) {
        std::size_t rejections = 0, runs = 0;
        for (std::size_t gi = 0; gi < kept.size(); ++gi) {
            for (std::size_t run = 0; run < config.monte_carlo_runs; ++run) {
                try {
                    // use the original grid index so results match run_power_study
                    if (power_study_cell_decision(config, kept[gi], run, test)) ++rejections;
                    ++runs;
                } catch (const std::exception&) {
                }
            }
        }
        SizeCell cell;
        cell.test = test;
        cell.n_runs = runs;
        if (runs > 0) {
            cell.size = static_cast<double>(rejections) / static_cast<double>(runs);
            const double se = std::sqrt(cell.size * (1.0 - cell.size) / static_cast<double>(runs));
            cell.ci_lower = std::max(0.0, cell.size - 1.959964 * se);
            cell.ci_upper = std::min(1.0, cell.size + 1.959964 * se);
        }
        out.push_back(cell);
    }
    return out;
}

}  // namespace frechet
