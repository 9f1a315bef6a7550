// evtool: tail index estimation with related variables, high quantile
// extrapolation, and the Monte Carlo study around them.
//
//   evtool estimate data.csv --k-sweep 40..60 --out report.csv
//   evtool quantile data.csv --k 50 --p 0.003
//   evtool simulate --model logistic --theta 0.3 --n 1000 --m 1000 --k 100
//   evtool tables --which table-2 --reps 10000 --out grid.csv

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "evt/adapted.hpp"
#include "evt/dataset.hpp"
#include "evt/montecarlo.hpp"
#include "evt/summaries.hpp"
#include "evt/sweep.hpp"

namespace {

struct CommonOptions {
    std::string data_path;
    std::string extra_path;
    bool tab = false;
    bool energy_from_magnitude = false;
    long k = 0;
    std::string k_sweep;
    long k_plus = 0;
    bool matched = false;
    double p = 0.01;
    std::string out_path;
};

std::string fmt(double v, int digits = 12) {
    std::ostringstream ss;
    ss.precision(digits);
    ss << v;
    return ss.str();
}

std::string sanitize(std::string s, char delimiter) {
    for (auto& c : s)
        if (c == delimiter || c == '\n') c = ';';
    return s;
}

// CLI11 reads config files only on the root application, so the per-command
// --config is wired by hand: file values fill whatever the command line left
// empty. Must be the first option added so its callback runs before the
// other options bind their results.
void add_config_option(CLI::App* cmd) {
    cmd->add_option_function<std::string>(
        "--config",
        [cmd](const std::string& path) {
            std::ifstream in(path);
            if (!in) throw CLI::FileError::Missing(path);
            for (const auto& item : cmd->get_config_formatter()->from_config(in)) {
                if (!item.parents.empty()) throw CLI::ConfigError::Extras(item.fullname());
                CLI::Option* op = cmd->get_option_no_throw("--" + item.name);
                if (op == nullptr) op = cmd->get_option_no_throw(item.name);
                if (op == nullptr) throw CLI::ConfigError::Extras(item.fullname());
                if (!op->empty()) continue;  // explicit arguments win
                if (item.inputs.empty())
                    op->add_result("true");
                else
                    for (const auto& input : item.inputs) op->add_result(input);
            }
        },
        "flat key=value configuration file");
}

void add_dataset_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("data", opt.data_path, "delimited data file (header row: x,y2,...)")
        ->required();
    cmd->add_option("--extra", opt.extra_path,
                    "second file of related-variable rows appended to the extra window");
    cmd->add_flag("--tab", opt.tab, "tab-delimited input and output instead of comma");
    cmd->add_flag("--energy-from-magnitude", opt.energy_from_magnitude,
                  "treat every column as a Richter magnitude and convert to radiated energy");
}

void add_tuning_options(CLI::App* cmd, CommonOptions& opt) {
    auto* k_opt = cmd->add_option("--k", opt.k, "number of upper order statistics");
    auto* sweep_opt =
        cmd->add_option("--k-sweep", opt.k_sweep, "inclusive k range LO..HI, one row per k");
    k_opt->excludes(sweep_opt);
    sweep_opt->excludes(k_opt);
    auto* kp = cmd->add_option("--k-plus", opt.k_plus,
                               "tail count for the longer related-variable record");
    auto* matched = cmd->add_flag("--matched", opt.matched,
                                  "matched rule k_plus = round(k (n+m)/n) (default when extra rows exist)");
    kp->excludes(matched);
    matched->excludes(kp);
}

std::pair<long, long> parse_sweep(const CommonOptions& opt) {
    if (!opt.k_sweep.empty()) {
        const auto dots = opt.k_sweep.find("..");
        if (dots == std::string::npos)
            throw CLI::ValidationError("--k-sweep", "expected LO..HI, e.g. 40..60");
        try {
            const long lo = std::stol(opt.k_sweep.substr(0, dots));
            const long hi = std::stol(opt.k_sweep.substr(dots + 2));
            return {lo, hi};
        } catch (const std::exception&) {
            throw CLI::ValidationError("--k-sweep", "expected LO..HI, e.g. 40..60");
        }
    }
    if (opt.k <= 0) throw CLI::ValidationError("--k", "either --k or --k-sweep is required");
    return {opt.k, opt.k};
}

evt::PairedSample load_sample(const CommonOptions& opt) {
    evt::CsvOptions csv;
    csv.delimiter = opt.tab ? '\t' : ',';
    evt::PairedSample sample = evt::load_paired_csv(opt.data_path, csv);
    if (!opt.extra_path.empty()) evt::append_extra_csv(sample, opt.extra_path, csv);
    if (opt.energy_from_magnitude) {
        // Magnitudes have light tails; the analysis runs on energies.
        for (auto& x : sample.x) x = evt::magnitude_to_energy(x);
        for (std::size_t r = 0; r < sample.y.rows(); ++r)
            for (std::size_t c = 0; c < sample.y.cols(); ++c)
                sample.y(r, c) = evt::magnitude_to_energy(sample.y(r, c));
        for (std::size_t r = 0; r < sample.y_extra.rows(); ++r)
            for (std::size_t c = 0; c < sample.y_extra.cols(); ++c)
                sample.y_extra(r, c) = evt::magnitude_to_energy(sample.y_extra(r, c));
    }
    return sample;
}

void write_sweep(std::ostream& out, const evt::SweepResult& result, char delimiter,
                 bool with_quantile) {
    out.precision(12);
    out << "k" << delimiter << "k_plus" << delimiter << "gamma_hill" << delimiter
        << "gamma_adapted" << delimiter << "std_error";
    for (int i = 1; i <= result.d; ++i)
        for (int j = i + 1; j <= result.d; ++j) {
            const std::string tag = std::to_string(i) + std::to_string(j);
            out << delimiter << "r" << tag << "_11" << delimiter << "r" << tag << "_1b"
                << delimiter << "r" << tag << "_b1";
        }
    if (with_quantile) out << delimiter << "quantile_hill" << delimiter << "quantile_adapted";
    out << delimiter << "warnings" << delimiter << "error\n";

    for (const auto& row : result.rows) {
        out << row.k << delimiter;
        if (row.k_plus > 0) out << row.k_plus;
        out << delimiter;
        if (row.error.empty()) out << row.gamma_hill;
        out << delimiter;
        if (row.gamma_adapted) out << *row.gamma_adapted;
        out << delimiter;
        if (row.std_error) out << *row.std_error;
        for (int i = 1; i <= result.d; ++i)
            for (int j = i + 1; j <= result.d; ++j) {
                out << delimiter;
                if (row.dependence) out << row.dependence->values.r11(i, j);
                out << delimiter;
                if (row.dependence) out << row.dependence->values.r_one_beta(i, j);
                out << delimiter;
                if (row.dependence) out << row.dependence->values.r_beta_one(i, j);
            }
        if (with_quantile) {
            out << delimiter;
            if (row.quantile_hill) out << *row.quantile_hill;
            out << delimiter;
            if (row.quantile_adapted) out << *row.quantile_adapted;
        }
        out << delimiter;
        for (std::size_t w = 0; w < row.warnings.size(); ++w) {
            if (w > 0) out << "; ";
            out << sanitize(row.warnings[w], delimiter);
        }
        out << delimiter << sanitize(row.error, delimiter) << "\n";
    }
}

int run_estimate(const CommonOptions& opt, bool with_quantile) {
    const evt::PairedSample sample = load_sample(opt);
    const auto [k_lo, k_hi] = parse_sweep(opt);

    evt::SweepConfig config;
    config.k_lo = k_lo;
    config.k_hi = k_hi;
    config.with_quantile = with_quantile;
    config.p = opt.p;
    if (opt.k_plus > 0) config.k_plus = opt.k_plus;
    // Without an explicit k_plus the matched rule applies whenever extra
    // rows exist; --matched only makes that choice explicit.

    const evt::SweepResult result = evt::run_sweep(sample, config);
    const char delimiter = opt.tab ? '\t' : ',';

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error(opt.out_path + ": cannot open for writing");
        write_sweep(out, result, delimiter, with_quantile);
        if (!out) throw std::runtime_error(opt.out_path + ": write failed");
    } else {
        write_sweep(std::cout, result, delimiter, with_quantile);
    }

    std::cout.precision(12);
    std::cout << "n=" << sample.n() << " m=" << sample.m() << " d=" << sample.d() << " k="
              << k_lo;
    if (k_hi != k_lo) std::cout << ".." << k_hi;
    std::cout << "\n";
    if (result.rows_ok == 0) {
        std::cerr << "error: estimation failed at every k: " << result.rows.front().error << "\n";
        return 1;
    }
    std::cout << "average gamma (Hill): " << *result.avg_hill << "\n";
    if (result.avg_adapted)
        std::cout << "average gamma (combined): " << *result.avg_adapted << "\n";
    if (with_quantile) {
        std::cout << "average quantile at p=" << fmt(opt.p) << " (Hill): "
                  << *result.avg_quantile_hill << "\n";
        if (result.avg_quantile_adapted)
            std::cout << "average quantile at p=" << fmt(opt.p)
                      << " (combined): " << *result.avg_quantile_adapted << "\n";
    }
    return 0;
}

void print_box(const std::string& name, const evt::FiveNumber& box) {
    std::cout << name << ": min=" << fmt(box.min) << " q1=" << fmt(box.q1)
              << " median=" << fmt(box.median) << " q3=" << fmt(box.q3) << " max=" << fmt(box.max)
              << " outliers=" << box.outliers << "\n";
}

int run_simulate(const evt::Scenario& scenario, int threads, const std::string& out_prefix) {
    const evt::ScenarioResult result = evt::run_scenario(scenario, threads);

    std::cout.precision(12);
    std::cout << "replications used: " << result.replications_used << " (failures: "
              << result.failures << ", replications with warnings: " << result.warning_replications
              << ")\n";
    std::cout << "tuning: k=" << result.tuning.k << " k_plus=" << result.tuning.k_plus
              << " nu2=" << fmt(result.tuning.nu2()) << " beta_hat=" << fmt(result.tuning.beta_hat())
              << "\n";
    std::cout << "hill: mean=" << fmt(result.hill_mean) << " variance=" << fmt(result.hill_variance)
              << "\n";
    std::cout << "combined: mean=" << fmt(result.adapted_mean)
              << " variance=" << fmt(result.adapted_variance) << "\n";
    std::ostringstream red;
    red.setf(std::ios::fixed);
    red.precision(1);
    red << result.reduction_pct;
    std::cout << "variance reduction: " << red.str() << "%\n";
    print_box("hill boxplot", result.hill_box);
    print_box("combined boxplot", result.adapted_box);

    if (!out_prefix.empty()) {
        {
            std::ofstream out(out_prefix + "_summary.csv");
            if (!out) throw std::runtime_error(out_prefix + "_summary.csv: cannot open for writing");
            out.precision(12);
            out << "estimator,mean,variance,reduction_pct,replications_used,failures,warnings\n";
            out << "hill," << result.hill_mean << "," << result.hill_variance << ",,"
                << result.replications_used << "," << result.failures << ","
                << result.warning_replications << "\n";
            out << "combined," << result.adapted_mean << "," << result.adapted_variance << ","
                << result.reduction_pct << "," << result.replications_used << ","
                << result.failures << "," << result.warning_replications << "\n";
        }
        {
            std::ofstream out(out_prefix + "_boxplot.csv");
            if (!out) throw std::runtime_error(out_prefix + "_boxplot.csv: cannot open for writing");
            out.precision(12);
            out << "estimator,min,q1,median,q3,max,outliers\n";
            out << "hill," << result.hill_box.min << "," << result.hill_box.q1 << ","
                << result.hill_box.median << "," << result.hill_box.q3 << ","
                << result.hill_box.max << "," << result.hill_box.outliers << "\n";
            out << "combined," << result.adapted_box.min << "," << result.adapted_box.q1 << ","
                << result.adapted_box.median << "," << result.adapted_box.q3 << ","
                << result.adapted_box.max << "," << result.adapted_box.outliers << "\n";
        }
        std::cout << "wrote " << out_prefix << "_summary.csv and " << out_prefix
                  << "_boxplot.csv\n";
    }
    return 0;
}

int run_tables(const std::string& which, long reps, std::uint64_t seed, int threads,
               const std::string& out_path) {
    evt::TableSelection selection;
    if (which == "table-1")
        selection = evt::TableSelection::table1;
    else if (which == "table-2")
        selection = evt::TableSelection::table2;
    else if (which == "both")
        selection = evt::TableSelection::both;
    else
        throw CLI::ValidationError("--which", "expected table-1, table-2 or both");

    const std::vector<evt::TableGrid> grids = evt::reproduce_tables(selection, reps, seed, threads);

    std::ofstream out_file;
    if (!out_path.empty()) {
        out_file.open(out_path);
        if (!out_file) throw std::runtime_error(out_path + ": cannot open for writing");
        out_file << "table,setting,model,reduction_pct,status\n";
    }

    for (const auto& grid : grids) {
        std::cout << grid.name << " (replications=" << grid.replications << ")";
        if (grid.low_replication_caveat)
            std::cout << "  [CAVEAT: below 10000 replications; values are noisy]";
        std::cout << "\n";

        std::size_t width = 12;
        for (const auto& label : grid.col_labels) width = std::max(width, label.size() + 2);
        std::size_t row_width = 0;
        for (const auto& label : grid.row_labels) row_width = std::max(row_width, label.size() + 2);

        std::cout << std::string(row_width, ' ');
        for (const auto& label : grid.col_labels)
            std::cout << label << std::string(width - label.size(), ' ');
        std::cout << "\n";
        for (std::size_t row = 0; row < grid.cells.size(); ++row) {
            const std::string& rl = grid.row_labels[row];
            std::cout << rl << std::string(row_width - rl.size(), ' ');
            for (const auto& cell : grid.cells[row]) {
                std::ostringstream ss;
                if (cell.failed) {
                    ss << "FAILED";
                } else {
                    ss.setf(std::ios::fixed);
                    ss.precision(1);
                    ss << cell.reduction_pct << "%";
                }
                std::cout << ss.str() << std::string(width - ss.str().size(), ' ');
                if (out_file) {
                    out_file << grid.name << "," << grid.row_labels[row] << "," << cell.label
                             << ",";
                    if (!cell.failed) {
                        out_file.setf(std::ios::fixed);
                        out_file.precision(3);
                        out_file << cell.reduction_pct;
                    }
                    out_file << "," << (cell.failed ? "failed" : "ok") << "\n";
                }
            }
            std::cout << "\n";
            for (const auto& cell : grid.cells[row])
                if (cell.failed)
                    std::cerr << "cell " << grid.row_labels[row] << " / " << cell.label
                              << " failed: " << cell.failure << "\n";
        }
        std::cout << "\n";
    }
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail index estimation with related variables"};
    app.require_subcommand(1);

    CommonOptions est_opt;
    CommonOptions qnt_opt;

    auto* estimate = app.add_subcommand("estimate", "Hill and combined tail index estimates");
    add_config_option(estimate);
    add_dataset_options(estimate, est_opt);
    add_tuning_options(estimate, est_opt);
    estimate->add_option("--out", est_opt.out_path, "write the per-k report to this file");

    auto* quantile = app.add_subcommand("quantile", "extrapolated high quantiles");
    add_config_option(quantile);
    add_dataset_options(quantile, qnt_opt);
    add_tuning_options(quantile, qnt_opt);
    quantile->add_option("--p", qnt_opt.p, "tail probability of the target quantile")->required();
    quantile->add_option("--out", qnt_opt.out_path, "write the per-k report to this file");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of one scenario");
    add_config_option(simulate);
    std::string model = "logistic";
    int sim_d = 2;
    double sim_s = 0.0, sim_r = 0.0, sim_theta = 0.5;
    evt::Scenario scenario;
    long sim_k_plus = 0;
    bool sim_matched = false;
    long sim_reps = 10000;
    std::uint64_t sim_seed = 1;
    int sim_threads = 0;
    std::string sim_out;
    simulate->add_option("--model", model, "cauchy or logistic")
        ->check(CLI::IsMember({"cauchy", "logistic"}));
    simulate->add_option("--d", sim_d, "dimension (target + related variables)");
    simulate->add_option("--s", sim_s, "cauchy scale entry between target and related");
    simulate->add_option("--r", sim_r, "cauchy scale entry between the two related (d=3)");
    simulate->add_option("--theta", sim_theta, "logistic dependence parameter in (0,1]");
    simulate->add_option("--n", scenario.n, "joint observations per replication");
    simulate->add_option("--m", scenario.m, "extra related-variable observations");
    simulate->add_option("--k", scenario.k, "tail count for the joint window");
    auto* sim_kp = simulate->add_option("--k-plus", sim_k_plus, "explicit k_plus");
    auto* sim_mt = simulate->add_flag("--matched", sim_matched, "matched k_plus rule (default)");
    sim_kp->excludes(sim_mt);
    sim_mt->excludes(sim_kp);
    simulate->add_option("--reps", sim_reps, "replications");
    simulate->add_option("--seed", sim_seed, "master seed");
    simulate->add_option("--threads", sim_threads, "worker threads (0 = hardware)");
    simulate->add_option("--out", sim_out, "prefix for _summary.csv and _boxplot.csv");

    auto* tables = app.add_subcommand("tables", "reproduce the variance-reduction tables");
    add_config_option(tables);
    std::string which = "both";
    long tab_reps = 10000;
    std::uint64_t tab_seed = 1;
    int tab_threads = 0;
    std::string tab_out;
    tables->add_option("--which", which, "table-1, table-2 or both");
    tables->add_option("--reps", tab_reps, "replications per cell");
    tables->add_option("--seed", tab_seed, "master seed");
    tables->add_option("--threads", tab_threads, "worker threads (0 = hardware)");
    tables->add_option("--out", tab_out, "write the grid in long form to this file");

    CLI11_PARSE(app, argc, argv);

    const auto auto_threads = [](int requested) {
        if (requested > 0) return requested;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    };

    try {
        if (estimate->parsed()) return run_estimate(est_opt, false);
        if (quantile->parsed()) return run_estimate(qnt_opt, true);
        if (simulate->parsed()) {
            if (model == "cauchy")
                scenario.model = evt::CauchyScenario{sim_d, sim_s, sim_r};
            else
                scenario.model = evt::LogisticScenario{sim_d, sim_theta};
            if (sim_k_plus > 0) scenario.k_plus = sim_k_plus;
            scenario.replications = sim_reps;
            scenario.master_seed = sim_seed;
            return run_simulate(scenario, auto_threads(sim_threads), sim_out);
        }
        if (tables->parsed()) return run_tables(which, tab_reps, tab_seed, auto_threads(tab_threads), tab_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
