// Command-line front end: k-sample tests, Fréchet variance confidence
// intervals, simulation studies and file format conversion.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frechet/baselines.hpp"
#include "frechet/errors.hpp"
#include "frechet/frechet.hpp"
#include "frechet/io.hpp"
#include "frechet/ksample.hpp"
#include "frechet/objects.hpp"
#include "frechet/power_study.hpp"

namespace {

using namespace frechet;

struct SpaceChoice {
    Space space = Space::Euclidean;
    MatrixKind kind = MatrixKind::Symmetric;
};

SpaceChoice parse_space(const std::string& s) {
    if (s == "wasserstein") return {Space::Wasserstein, MatrixKind::Symmetric};
    if (s == "frobenius-laplacian") return {Space::Frobenius, MatrixKind::Laplacian};
    if (s == "frobenius-correlation") return {Space::Frobenius, MatrixKind::Correlation};
    if (s == "frobenius-symmetric") return {Space::Frobenius, MatrixKind::Symmetric};
    if (s == "euclidean") return {Space::Euclidean, MatrixKind::Symmetric};
    throw input_error("unknown space: " + s);
}

// Objects from one input path in the chosen space.
ObjectSample load_objects(const std::string& path, const SpaceChoice& sc, bool raw,
                          std::size_t grid_size) {
    switch (sc.space) {
        case Space::Wasserstein: {
            auto objs = raw ? io::read_raw_sample_csv(path, grid_size)
                            : io::read_quantile_csv(path);
            return ObjectSample::from_quantiles(objs);
        }
        case Space::Frobenius:
            return ObjectSample::from_matrices(io::read_matrix_objects(path, sc.kind));
        case Space::Euclidean:
            return ObjectSample::from_points(io::read_vector_csv(path));
    }
    throw input_error("bad space");
}

GroupedSample load_grouped(const std::vector<std::string>& inputs, const std::string& labels_path,
                           const SpaceChoice& sc, bool raw, std::size_t grid_size) {
    if (inputs.size() >= 2) {
        ObjectSample all = load_objects(inputs[0], sc, raw, grid_size);
        std::vector<int> labels(all.size(), 1);
        for (std::size_t g = 1; g < inputs.size(); ++g) {
            ObjectSample next = load_objects(inputs[g], sc, raw, grid_size);
            labels.insert(labels.end(), next.size(), static_cast<int>(g + 1));
            all = ObjectSample::concat(all, next);
        }
        return GroupedSample(std::move(all), std::move(labels), static_cast<int>(inputs.size()));
    }
    if (labels_path.empty()) {
        throw input_error("a single input file requires --labels");
    }
    ObjectSample all = load_objects(inputs[0], sc, raw, grid_size);
    std::vector<int> labels = io::read_labels(labels_path);
    int k = 0;
    for (int l : labels) k = std::max(k, l);
    return GroupedSample(std::move(all), std::move(labels), k);
}

int cmd_test(const std::vector<std::string>& inputs, const std::string& labels_path,
             const std::string& space, const std::string& method, double alpha,
             std::size_t replicates, std::uint64_t seed, bool raw, std::size_t grid_size,
             const std::string& output) {
    const SpaceChoice sc = parse_space(space);
    const GroupedSample data = load_grouped(inputs, labels_path, sc, raw, grid_size);
    KSampleReport report;
    if (method == "asymptotic") {
        report = asymptotic_test(data, alpha);
    } else if (method == "permutation") {
        report = permutation_test(data, replicates, seed, alpha);
    } else if (method == "bootstrap") {
        report = bootstrap_test(data, replicates, seed, alpha);
    } else if (method == "energy" || method == "mmd") {
        const BaselineReport br = method == "energy" ? energy_test(data, replicates, seed)
                                                     : mmd_test(data, replicates, seed);
        std::cout << method << " statistic = " << br.statistic << ", p = " << br.p_value
                  << " (seed " << seed << ", " << RandomStream::algorithm_id << ")\n";
        std::cout << (br.p_value <= alpha ? "REJECT" : "FAIL TO REJECT")
                  << " equality of the two groups at level " << alpha << "\n";
        if (!output.empty()) {
            nlohmann::json j{{"test", br.test},
                             {"statistic", br.statistic},
                             {"p_value", br.p_value},
                             {"replicates", br.replicates_used},
                             {"seed", br.seed},
                             {"alpha", alpha},
                             {"algorithm_id", RandomStream::algorithm_id}};
            std::ofstream(output) << j.dump(2) << '\n';
        }
        return 0;
    } else {
        throw CLI::ValidationError("--method", "unknown method: " + method);
    }
    const double p = report.p_resampled ? *report.p_resampled : report.p_asymptotic;
    std::cout << "T_n = " << report.t_n << ", df = " << report.df << ", p = " << p << " ("
              << to_string(report.method);
    if (report.method != TestMethod::Asymptotic) {
        std::cout << ", B = " << report.replicates_used << ", seed " << seed << ", "
                  << RandomStream::algorithm_id;
    }
    std::cout << ")\n";
    std::cout << (report.reject ? "REJECT" : "FAIL TO REJECT")
              << " equality of population distributions at level " << alpha << "\n";
    if (!output.empty()) {
        std::ofstream(output) << io::report_to_json(report).dump(2) << '\n';
    }
    return 0;
}

int cmd_ci(const std::string& input, const std::string& space, const std::string& method,
           double level, std::size_t replicates, std::size_t resample_size, std::uint64_t seed,
           bool raw, std::size_t grid_size) {
    const SpaceChoice sc = parse_space(space);
    const ObjectSample sample = load_objects(input, sc, raw, grid_size);
    const FrechetSummary summary = frechet_summary(sample);
    std::cout << "n = " << summary.n << ", V_hat = " << summary.variance
              << ", sigma_sq_hat = " << summary.sigma_sq << "\n";
    if (method == "asymptotic") {
        const IntervalEstimate v = variance_interval(summary, level);
        const IntervalEstimate s = stddev_interval(summary, level);
        std::cout << level * 100 << "% CI for Frechet variance: [" << v.lower << ", " << v.upper
                  << "]\n";
        std::cout << level * 100 << "% CI for Frechet std deviation: [" << s.lower << ", "
                  << s.upper << "]\n";
    } else if (method == "bootstrap") {
        const IntervalEstimate v =
            bootstrap_variance_interval(sample, level, replicates, resample_size, seed);
        std::cout << level * 100 << "% bootstrap CI for Frechet variance: [" << v.lower << ", "
                  << v.upper << "] (B = " << replicates << ", discarded " << v.discarded_replicates
                  << ", seed " << seed << ", " << RandomStream::algorithm_id << ")\n";
    } else {
        throw CLI::ValidationError("--method", "ci method must be asymptotic or bootstrap");
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& output_override) {
    std::ifstream in(config_path);
    if (!in) throw input_error("cannot open config: " + config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw input_error(config_path + ": invalid JSON: " + e.what());
    }
    StudyConfig config = study_config_from_json(j);
    if (!output_override.empty()) config.output = output_override;
    std::cout << "seed " << config.seed << ", " << RandomStream::algorithm_id << "\n";
    const PowerCurve curve = run_power_study(config);
    std::cout << "scenario,param,test,n_runs,rejections,errors,rate,se\n";
    for (const auto& c : curve.cells) {
        std::cout << c.scenario << ',' << c.param << ',' << c.test << ',' << c.n_runs << ','
                  << c.rejections << ',' << c.errors << ',' << c.rate << ',' << c.se << "\n";
    }
    return 0;
}

int cmd_convert(const std::string& mode, const std::string& input, const std::string& output,
                std::size_t grid_size) {
    if (mode == "quantile") {
        io::write_quantile_csv(output, io::read_raw_sample_csv(input, grid_size));
    } else if (mode == "laplacian") {
        if (std::filesystem::is_directory(input)) {
            std::filesystem::create_directories(output);
            for (const auto& e : std::filesystem::directory_iterator(input)) {
                if (!e.is_regular_file()) continue;
                std::size_t dim = 0;
                auto w = io::read_matrix_file(e.path().string(), dim);
                io::write_matrix_file((std::filesystem::path(output) / e.path().filename()).string(),
                                      laplacian_from_adjacency(w, dim));
            }
        } else {
            std::size_t dim = 0;
            auto w = io::read_matrix_file(input, dim);
            io::write_matrix_file(output, laplacian_from_adjacency(w, dim));
        }
    } else {
        throw CLI::ValidationError("--mode", "convert mode must be quantile or laplacian");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frechet ANOVA: tests, confidence intervals and simulations for "
                 "metric-space-valued data"};
    app.require_subcommand(1);

    // test
    auto* test = app.add_subcommand("test", "k-sample test for equality of distributions");
    std::vector<std::string> test_inputs;
    std::string test_space, test_labels, test_output;
    std::string test_method = "permutation";
    double test_alpha = 0.05;
    std::size_t test_replicates = 999, test_grid = 100;
    std::uint64_t test_seed = 1;
    bool test_raw = false;
    test->add_option("inputs", test_inputs, "group files (one per group) or a single file")
        ->required();
    test->add_option("--space", test_space,
                     "wasserstein|frobenius-laplacian|frobenius-correlation|euclidean")
        ->required();
    test->add_option("--method", test_method, "asymptotic|permutation|bootstrap|energy|mmd");
    test->add_option("--alpha", test_alpha, "test level");
    test->add_option("--replicates", test_replicates, "resampling replicates");
    test->add_option("--seed", test_seed, "root seed");
    test->add_option("--labels", test_labels, "labels file for single-input mode");
    test->add_option("--grid-size", test_grid, "quantile grid size for --raw inputs");
    test->add_flag("--raw", test_raw, "treat Wasserstein rows as raw samples");
    test->add_option("--output", test_output, "write the report as JSON");

    // ci
    auto* ci = app.add_subcommand("ci", "confidence intervals for Frechet variance");
    std::string ci_input, ci_space, ci_method = "asymptotic";
    double ci_level = 0.95;
    std::size_t ci_replicates = 500, ci_resample = 0, ci_grid = 100;
    std::uint64_t ci_seed = 1;
    bool ci_raw = false;
    ci->add_option("input", ci_input, "object sample file")->required();
    ci->add_option("--space", ci_space,
                   "wasserstein|frobenius-laplacian|frobenius-correlation|euclidean")
        ->required();
    ci->add_option("--method", ci_method, "asymptotic|bootstrap");
    ci->add_option("--level", ci_level, "confidence level");
    ci->add_option("--replicates", ci_replicates, "bootstrap replicates");
    ci->add_option("--resample-size", ci_resample, "bootstrap resample size m (default n)");
    ci->add_option("--seed", ci_seed, "root seed");
    ci->add_option("--grid-size", ci_grid, "quantile grid size for --raw inputs");
    ci->add_flag("--raw", ci_raw, "treat Wasserstein rows as raw samples");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo power study");
    std::string sim_config, sim_output;
    sim->add_option("--config", sim_config, "study config JSON")->required();
    sim->add_option("--output", sim_output, "override the CSV output path");

    // convert
    auto* conv = app.add_subcommand("convert", "convert input file formats");
    std::string conv_mode, conv_input, conv_output;
    std::size_t conv_grid = 100;
    conv->add_option("--mode", conv_mode, "quantile|laplacian")->required();
    conv->add_option("input", conv_input, "input file or directory")->required();
    conv->add_option("--output", conv_output, "output file or directory")->required();
    conv->add_option("--grid-size", conv_grid, "quantile grid size");

    try {
        app.parse(argc, argv);
        if (test->parsed()) {
            return cmd_test(test_inputs, test_labels, test_space, test_method, test_alpha,
                            test_replicates, test_seed, test_raw, test_grid, test_output);
        }
        if (ci->parsed()) {
            return cmd_ci(ci_input, ci_space, ci_method, ci_level, ci_replicates, ci_resample,
                          ci_seed, ci_raw, ci_grid);
        }
        if (sim->parsed()) return cmd_simulate(sim_config, sim_output);
        if (conv->parsed()) return cmd_convert(conv_mode, conv_input, conv_output, conv_grid);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const frechet::degenerate_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const frechet::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
