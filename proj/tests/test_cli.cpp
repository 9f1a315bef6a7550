#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "evt/adapted.hpp"
#include "evt/dataset.hpp"
#include "evt/estimators.hpp"
#include "evt/rng.hpp"

using Catch::Matchers::WithinRel;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("evtool_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_tool(const TempDir& dir, const std::string& args) {
    const std::string out_path = dir.file("stdout.txt");
    const std::string err_path = dir.file("stderr.txt");
    const std::string cmd = std::string("\"") + EVTOOL_PATH + "\" " + args + " > \"" + out_path +
                            "\" 2> \"" + err_path + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

// Value following `marker` on its line in `text`.
double parse_after(const std::string& text, const std::string& marker) {
    const auto pos = text.find(marker);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + marker.size()));
}

long count_lines(const std::string& text) {
    long lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

evt::PairedSample make_sample(std::uint64_t seed, std::size_t n, std::size_t m) {
    evt::RngStream stream(evt::StreamSpec{seed, 0});
    evt::PairedSample s;
    s.x.resize(n);
    s.y = evt::Matrix(n, 1);
    s.y_extra = evt::Matrix(m, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double shared = stream.normal();
        s.x[i] = std::exp(shared);
        s.y(i, 0) = std::exp(0.7 * shared + 0.3 * stream.normal());
    }
    for (std::size_t i = 0; i < m; ++i) s.y_extra(i, 0) = std::exp(stream.normal());
    return s;
}

}  // namespace

TEST_CASE("estimate at a single k reproduces the library result") {
    TempDir dir;
    const evt::PairedSample s = make_sample(301, 400, 200);
    const std::string data = dir.file("data.csv");
    evt::save_paired_csv(data, s);

    const RunResult r = run_tool(dir, "estimate \"" + data + "\" --k 40");
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("n=400 m=200 d=2 k=40") != std::string::npos);

    const evt::EstimateReport rep = evt::adapted_hill(s, evt::TuningParams::matched(40, 400, 200));
    REQUIRE_THAT(parse_after(r.out, "average gamma (Hill): "), WithinRel(rep.gamma1_hill, 1e-10));
    REQUIRE_THAT(parse_after(r.out, "average gamma (combined): "),
                 WithinRel(rep.gamma_adapted, 1e-10));
}

TEST_CASE("estimate sweep writes one data row per k") {
    TempDir dir;
    const evt::PairedSample s = make_sample(302, 400, 200);
    const std::string data = dir.file("data.csv");
    const std::string report = dir.file("report.csv");
    evt::save_paired_csv(data, s);

    const RunResult r =
        run_tool(dir, "estimate \"" + data + "\" --k-sweep 40..60 --out \"" + report + "\"");
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("k=40..60") != std::string::npos);
    REQUIRE(r.out.find("average gamma (Hill): ") != std::string::npos);
    REQUIRE(r.out.find("average gamma (combined): ") != std::string::npos);

    const std::string csv = slurp(report);
    REQUIRE(count_lines(csv) == 22);  // header + 21 rows
    REQUIRE(csv.rfind("k,k_plus,gamma_hill,gamma_adapted,std_error,r12_11,r12_1b,r12_b1,warnings,error\n",
                      0) == 0);
}

TEST_CASE("quantile at p = k/n returns the anchor order statistic") {
    TempDir dir;
    const evt::PairedSample s = make_sample(303, 512, 0);
    const std::string data = dir.file("data.csv");
    evt::save_paired_csv(data, s);

    const RunResult r = run_tool(dir, "quantile \"" + data + "\" --k 128 --p 0.25");
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    const evt::SortedSample sorted = evt::order_statistics(s.x);
    const double anchor = sorted.values[512 - 128 - 1];
    REQUIRE_THAT(parse_after(r.out, "average quantile at p=0.25 (Hill): "),
                 WithinRel(anchor, 1e-10));
}

TEST_CASE("quantile requires the tail probability") {
    TempDir dir;
    const evt::PairedSample s = make_sample(304, 100, 0);
    const std::string data = dir.file("data.csv");
    evt::save_paired_csv(data, s);
    const RunResult r = run_tool(dir, "quantile \"" + data + "\" --k 10");
    REQUIRE(r.exit_code != 0);
}

TEST_CASE("estimate without extra rows reports Hill only") {
    TempDir dir;
    const evt::PairedSample s = make_sample(305, 200, 0);
    const std::string data = dir.file("data.csv");
    evt::save_paired_csv(data, s);

    const RunResult r = run_tool(dir, "estimate \"" + data + "\" --k 20");
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("average gamma (Hill): ") != std::string::npos);
    REQUIRE(r.out.find("average gamma (combined): ") == std::string::npos);
    REQUIRE(r.out.find("combined estimator skipped") != std::string::npos);
}

TEST_CASE("malformed data is reported with its file row") {
    TempDir dir;
    const std::string data = dir.file("bad.csv");
    {
        std::ofstream out(data);
        out << "x,y2\n1.0,2.0\nnot_a_number,2.5\n3.0,4.0\n";
    }
    const RunResult r = run_tool(dir, "estimate \"" + data + "\" --k 5");
    REQUIRE(r.exit_code == 1);
    REQUIRE(r.err.find("error: ") != std::string::npos);
    REQUIRE(r.err.find("row 3") != std::string::npos);
}

TEST_CASE("simulate writes summary and boxplot files deterministically") {
    TempDir dir;
    const std::string args =
        "simulate --model logistic --theta 0.5 --n 200 --m 100 --k 20 --reps 60 --seed 5 "
        "--threads 1 --out \"" +
        dir.file("simA") + "\"";
    const RunResult r = run_tool(dir, args);
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("replications used: 60") != std::string::npos);
    REQUIRE(r.out.find("variance reduction: ") != std::string::npos);
    REQUIRE(r.out.find("hill boxplot: min=") != std::string::npos);

    const std::string summary = slurp(dir.file("simA_summary.csv"));
    const std::string boxplot = slurp(dir.file("simA_boxplot.csv"));
    REQUIRE(count_lines(summary) == 3);
    REQUIRE(count_lines(boxplot) == 3);
    REQUIRE(summary.rfind("estimator,mean,variance,reduction_pct,", 0) == 0);

    // Same seed, same files.
    const std::string args2 =
        "simulate --model logistic --theta 0.5 --n 200 --m 100 --k 20 --reps 60 --seed 5 "
        "--threads 1 --out \"" +
        dir.file("simB") + "\"";
    const RunResult r2 = run_tool(dir, args2);
    REQUIRE(r2.exit_code == 0);
    REQUIRE(slurp(dir.file("simB_summary.csv")) == summary);
    REQUIRE(slurp(dir.file("simB_boxplot.csv")) == boxplot);
}

TEST_CASE("simulate accepts the cauchy model") {
    TempDir dir;
    const RunResult r = run_tool(
        dir, "simulate --model cauchy --d 2 --s 0.5 --n 150 --m 75 --k 15 --reps 40 --seed 9 "
             "--threads 1");
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("tuning: k=15") != std::string::npos);
    const RunResult bad = run_tool(dir, "simulate --model gaussian --n 100");
    REQUIRE(bad.exit_code != 0);
}

TEST_CASE("tables grid run with a small replication count") {
    TempDir dir;
    const std::string grid = dir.file("grid.csv");
    const RunResult r = run_tool(
        dir, "tables --which table-2 --reps 100 --seed 3 --threads 1 --out \"" + grid + "\"");
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("table-2 (replications=100)") != std::string::npos);
    REQUIRE(r.out.find("[CAVEAT: below 10000 replications") != std::string::npos);
    const std::string csv = slurp(grid);
    REQUIRE(count_lines(csv) == 19);  // header + 3 settings x 6 models
    REQUIRE(csv.rfind("table,setting,model,reduction_pct,status\n", 0) == 0);
    std::size_t ok_rows = 0;
    for (std::size_t pos = csv.find(",ok\n"); pos != std::string::npos;
         pos = csv.find(",ok\n", pos + 1))
        ++ok_rows;
    REQUIRE(ok_rows == 18);
}

TEST_CASE("energy conversion applies to the target and the related columns") {
    TempDir dir;
    evt::RngStream stream(evt::StreamSpec{307, 0});
    evt::PairedSample mag;
    mag.x.resize(200);
    mag.y = evt::Matrix(200, 1);
    mag.y_extra = evt::Matrix(100, 1);
    for (std::size_t i = 0; i < 200; ++i) {
        const double shared = stream.exponential();
        mag.x[i] = 3.0 + shared / 1.5;
        mag.y(i, 0) = 3.0 + (0.7 * shared + 0.3 * stream.exponential()) / 1.5;
    }
    for (std::size_t i = 0; i < 100; ++i) mag.y_extra(i, 0) = 3.0 + stream.exponential() / 1.5;
    evt::PairedSample energy = mag;
    for (auto& x : energy.x) x = evt::magnitude_to_energy(x);
    for (std::size_t i = 0; i < 200; ++i)
        energy.y(i, 0) = evt::magnitude_to_energy(energy.y(i, 0));
    for (std::size_t i = 0; i < 100; ++i)
        energy.y_extra(i, 0) = evt::magnitude_to_energy(energy.y_extra(i, 0));
    const std::string mag_path = dir.file("magnitudes.csv");
    const std::string energy_path = dir.file("energies.csv");
    evt::save_paired_csv(mag_path, mag);
    evt::save_paired_csv(energy_path, energy);

    const RunResult converted =
        run_tool(dir, "estimate \"" + mag_path + "\" --k 20 --energy-from-magnitude");
    const RunResult direct = run_tool(dir, "estimate \"" + energy_path + "\" --k 20");
    REQUIRE(converted.exit_code == 0);
    REQUIRE(direct.exit_code == 0);
    REQUIRE(converted.out == direct.out);
}

TEST_CASE("options can come from a config file") {
    TempDir dir;
    const evt::PairedSample s = make_sample(306, 300, 150);
    const std::string data = dir.file("data.csv");
    evt::save_paired_csv(data, s);
    const std::string cfg = dir.file("run.cfg");
    {
        std::ofstream out(cfg);
        out << "k=25\n";
    }
    const RunResult direct = run_tool(dir, "estimate \"" + data + "\" --k 25");
    const RunResult via_cfg = run_tool(dir, "estimate \"" + data + "\" --config \"" + cfg + "\"");
    CAPTURE(via_cfg.err);
    REQUIRE(direct.exit_code == 0);
    REQUIRE(via_cfg.exit_code == 0);
    REQUIRE(via_cfg.out == direct.out);
}

TEST_CASE("unknown subcommands fail") {
    TempDir dir;
    const RunResult r = run_tool(dir, "frobnicate");
    REQUIRE(r.exit_code != 0);
}
