#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef FRECHET_CLI_PATH
#error "FRECHET_CLI_PATH must be defined by the build"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const std::string cmd =
        std::string(FRECHET_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = (raw >= 0 && (raw & 0x7f) == 0) ? ((raw >> 8) & 0xff) : -1;
    r.out = slurp("cli_stdout.txt");
    r.err = slurp("cli_stderr.txt");
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream(path) << content;
}

}  // namespace

TEST_CASE("test subcommand on identical group files") {
    write_file("cli_g1.csv", "0\n1\n2\n3\n");
    write_file("cli_g2.csv", "0\n1\n2\n3\n");
    const auto r = run_cli("test cli_g1.csv cli_g2.csv --space euclidean --method permutation "
                           "--replicates 99 --seed 7 --output cli_report.json");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL TO REJECT") != std::string::npos);
    nlohmann::json j;
    std::ifstream("cli_report.json") >> j;
    CHECK(j["t_n"].get<double>() == doctest::Approx(0.0));
    CHECK(j["p_resampled"].get<double>() == 1.0);
    CHECK(j["f_n"].get<double>() == doctest::Approx(0.0));
    CHECK(j["df"] == 1);
    CHECK(j["seed"] == 7);
    CHECK(j["reject"] == false);
}

TEST_CASE("test subcommand rejects a group of size 1") {
    write_file("cli_g1.csv", "0\n1\n2\n");
    write_file("cli_tiny.csv", "5\n");
    const auto r = run_cli("test cli_g1.csv cli_tiny.csv --space euclidean");
    CHECK(r.code == 2);
    CHECK(r.err.find("group 2") != std::string::npos);
}

TEST_CASE("test subcommand maps degenerate data to exit 3") {
    write_file("cli_c1.csv", "1\n1\n1\n");
    write_file("cli_c2.csv", "2\n2\n2\n");
    const auto r = run_cli("test cli_c1.csv cli_c2.csv --space euclidean --method asymptotic");
    CHECK(r.code == 3);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("test cli_g1.csv cli_g2.csv").code == 1);       // missing --space
    CHECK(run_cli("").code == 1);                                 // missing subcommand
    CHECK(run_cli("frobnicate x").code == 1);                     // unknown subcommand
}

TEST_CASE("single-input mode needs labels and honors them") {
    write_file("cli_all.csv", "0\n1\n2\n10\n11\n12\n");
    CHECK(run_cli("test cli_all.csv --space euclidean --method asymptotic").code == 2);
    write_file("cli_labels.txt", "1 1 1 2 2 2\n");
    const auto r = run_cli("test cli_all.csv --labels cli_labels.txt --space euclidean "
                           "--method asymptotic");
    CHECK(r.code == 0);
    CHECK(r.out.find("REJECT") != std::string::npos);
}

TEST_CASE("ci subcommand prints both asymptotic intervals") {
    write_file("cli_sample.csv", "0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n");
    const auto r = run_cli("ci cli_sample.csv --space euclidean --level 0.9");
    CHECK(r.code == 0);
    CHECK(r.out.find("V_hat = 8.25") != std::string::npos);
    CHECK(r.out.find("90% CI for Frechet variance") != std::string::npos);
    CHECK(r.out.find("90% CI for Frechet std deviation") != std::string::npos);

    const auto boot = run_cli("ci cli_sample.csv --space euclidean --method bootstrap "
                              "--replicates 200 --seed 3");
    CHECK(boot.code == 0);
    CHECK(boot.out.find("bootstrap CI") != std::string::npos);
    CHECK(boot.out.find("mt19937_64/splitmix64-derived") != std::string::npos);
    // same seed, same interval
    CHECK(run_cli("ci cli_sample.csv --space euclidean --method bootstrap --replicates 200 "
                  "--seed 3").out == boot.out);
}

TEST_CASE("simulate is byte-identical across runs") {
    write_file("cli_study.json", R"({
  "scenario": "location",
  "grid": [0.0, 2.0],
  "group_sizes": [12, 12],
  "tests": ["tn_asymptotic"],
  "monte_carlo_runs": 8,
  "grid_size": 15,
  "seed": 99,
  "output": "cli_ps.csv"
})");
    const auto a = run_cli("simulate --config cli_study.json");
    CHECK(a.code == 0);
    const std::string csv_a = slurp("cli_ps.csv");
    const auto b = run_cli("simulate --config cli_study.json");
    CHECK(b.code == 0);
    CHECK(slurp("cli_ps.csv") == csv_a);
    CHECK(a.out == b.out);
    CHECK(csv_a.rfind("scenario,param,test,n_runs,rejections,errors,rate,se\n", 0) == 0);

    const auto bad = run_cli("simulate --config cli_missing.json");
    CHECK(bad.code == 2);
}

TEST_CASE("convert quantile turns raw rows into monotone grids") {
    write_file("cli_raw.csv", "3,1,2,0\n5,5,5,5,5\n");
    const auto r = run_cli("convert --mode quantile cli_raw.csv --output cli_q.csv "
                           "--grid-size 4");
    CHECK(r.code == 0);
    std::ifstream q("cli_q.csv");
    std::string line;
    int rows = 0;
    while (std::getline(q, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string f;
        double prev = -1e300;
        int cols = 0;
        while (std::getline(ss, f, ',')) {
            const double v = std::stod(f);
            CHECK(v >= prev);
            prev = v;
            ++cols;
        }
        CHECK(cols == 4);
    }
    CHECK(rows == 2);
    // converted output is accepted directly as quantile input; two-object
    // groups have sigma_sq = 0, so the test reports the degeneracy (exit 3)
    write_file("cli_q2.csv", slurp("cli_q.csv"));
    CHECK(run_cli("test cli_q.csv cli_q2.csv --space wasserstein --method asymptotic").code == 3);
}

TEST_CASE("convert laplacian builds L = D - W from an adjacency matrix") {
    write_file("cli_adj.txt", "0 1 0\n1 0 2\n0 2 0\n");
    const auto r = run_cli("convert --mode laplacian cli_adj.txt --output cli_lap.txt");
    CHECK(r.code == 0);
    std::ifstream in("cli_lap.txt");
    double m[9];
    for (auto& v : m) in >> v;
    CHECK(m[0] == 1.0);
    CHECK(m[1] == -1.0);
    CHECK(m[4] == 3.0);
    CHECK(m[5] == -2.0);
    CHECK(m[8] == 2.0);
}
