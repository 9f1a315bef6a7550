#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "evt/adapted.hpp"
#include "evt/estimators.hpp"
#include "evt/paired_sample.hpp"
#include "evt/rng.hpp"
#include "evt/sampling.hpp"
#include "evt/summaries.hpp"

namespace evt {

// Cauchy distribution restricted to the positive orthant, scale matrix with
// off-diagonal s (and r between the two related variables when d = 3).
struct CauchyScenario {
    int d = 2;
    double s = 0.0;
    double r = 0.0;
};

struct LogisticScenario {
    int d = 2;
    double theta = 0.5;
};

struct Scenario {
    std::variant<CauchyScenario, LogisticScenario> model;
    long n = 1000;
    long m = 500;
    long k = 100;
    std::optional<long> k_plus;  // empty: matched rule k_plus = round(k (n+m)/n)
    long replications = 10000;
    std::uint64_t master_seed = 1;
};

struct ScenarioResult {
    TuningParams tuning;
    long replications_requested = 0;
    long replications_used = 0;
    long failures = 0;
    long warning_replications = 0;
    double hill_mean = 0.0;
    double adapted_mean = 0.0;
    double hill_variance = 0.0;
    double adapted_variance = 0.0;
    double reduction_pct = 0.0;  // 100 (1 - adapted_variance/hill_variance)
    FiveNumber hill_box;
    FiveNumber adapted_box;
    std::vector<std::string> failure_reasons;  // distinct messages, first few
};

inline TuningParams scenario_tuning(const Scenario& sc) {
    return sc.k_plus ? TuningParams::checked(sc.k, *sc.k_plus, sc.n, sc.m)
                     : TuningParams::matched(sc.k, sc.n, sc.m);
}

inline int scenario_dimension(const Scenario& sc) {
    return std::visit([](const auto& model) { return model.d; }, sc.model);
}

// Runs every replication of a scenario and aggregates the Hill and combined
// estimates. Replication r draws from the stream (master_seed, r), so the
// result is bit-identical for any worker count: workers claim replication
// indices from a shared counter and write into per-replication slots, and
// the aggregation always walks the slots in index order.
inline ScenarioResult run_scenario(const Scenario& sc, int worker_count = 1) {
    if (worker_count < 1) throw std::invalid_argument("run_scenario: worker count must be >= 1");
    if (sc.replications < 2) throw std::invalid_argument("run_scenario: need at least 2 replications");
    const TuningParams tuning = scenario_tuning(sc);
    const int d = scenario_dimension(sc);

    // Construct the model up front so parameter errors surface before any
    // replication runs.
    std::optional<ScaleMatrix> scale;
    std::optional<LogisticParam> logistic;
    if (const auto* cauchy = std::get_if<CauchyScenario>(&sc.model)) {
        if (cauchy->d == 2)
            scale = ScaleMatrix::bivariate(cauchy->s);
        else if (cauchy->d == 3)
            scale = ScaleMatrix::trivariate(cauchy->s, cauchy->r);
        else
            scale = ScaleMatrix::equicorrelated(cauchy->d, cauchy->s);
    } else {
        logistic = LogisticParam(std::get<LogisticScenario>(sc.model).d,
                                 std::get<LogisticScenario>(sc.model).theta);
    }

    const long reps = sc.replications;
    const long total = sc.n + sc.m;
    std::vector<double> hills(static_cast<std::size_t>(reps), 0.0);
    std::vector<double> adapteds(static_cast<std::size_t>(reps), 0.0);
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(reps), 0);
    std::vector<std::uint8_t> warned(static_cast<std::size_t>(reps), 0);
    std::vector<std::string> reasons(static_cast<std::size_t>(reps));

    std::atomic<long> next{0};
    std::atomic<bool> fatal{false};
    std::mutex fatal_mutex;
    std::string fatal_message;

    const auto worker = [&]() {
        try {
            std::vector<double> row(static_cast<std::size_t>(d));
            for (;;) {
                const long rep = next.fetch_add(1, std::memory_order_relaxed);
                if (rep >= reps || fatal.load(std::memory_order_relaxed)) break;
                RngStream stream(StreamSpec{sc.master_seed, static_cast<std::uint64_t>(rep)});

                PairedSample sample;
                sample.x.resize(static_cast<std::size_t>(sc.n));
                sample.y = Matrix(static_cast<std::size_t>(sc.n), static_cast<std::size_t>(d - 1));
                sample.y_extra =
                    Matrix(static_cast<std::size_t>(sc.m), static_cast<std::size_t>(d - 1));
                // Extra rows are full d-variate draws with the target
                // discarded, so joint and extra observations share one law.
                for (long i = 0; i < total; ++i) {
                    if (scale)
                        orthant_cauchy_row(*scale, stream, row.data());
                    else
                        logistic_row(*logistic, stream, row.data());
                    if (i < sc.n) {
                        sample.x[static_cast<std::size_t>(i)] = row[0];
                        for (int j = 1; j < d; ++j)
                            sample.y(static_cast<std::size_t>(i), static_cast<std::size_t>(j - 1)) =
                                row[static_cast<std::size_t>(j)];
                    } else {
                        for (int j = 1; j < d; ++j)
                            sample.y_extra(static_cast<std::size_t>(i - sc.n),
                                           static_cast<std::size_t>(j - 1)) =
                                row[static_cast<std::size_t>(j)];
                    }
                }

                const auto slot = static_cast<std::size_t>(rep);
                try {
                    const EstimateReport report = adapted_hill(sample, tuning);
                    hills[slot] = report.gamma1_hill;
                    adapteds[slot] = report.gamma_adapted;
                    ok[slot] = 1;
                    warned[slot] = report.warnings.empty() ? 0 : 1;
                } catch (const std::exception& e) {
                    reasons[slot] = e.what();
                }
            }
        } catch (const std::exception& e) {
            const std::lock_guard<std::mutex> lock(fatal_mutex);
            fatal_message = e.what();
            fatal.store(true, std::memory_order_relaxed);
        }
    };

    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (fatal.load()) throw std::runtime_error("run_scenario: " + fatal_message);

    ScenarioResult result;
    result.tuning = tuning;
    result.replications_requested = reps;

    std::vector<double> h;
    std::vector<double> a;
    h.reserve(static_cast<std::size_t>(reps));
    a.reserve(static_cast<std::size_t>(reps));
    for (long rep = 0; rep < reps; ++rep) {
        const auto slot = static_cast<std::size_t>(rep);
        if (ok[slot]) {
            h.push_back(hills[slot]);
            a.push_back(adapteds[slot]);
            result.warning_replications += warned[slot];
        } else {
            ++result.failures;
            bool seen = false;
            for (const auto& known : result.failure_reasons)
                if (known == reasons[slot]) seen = true;
            if (!seen && result.failure_reasons.size() < 5)
                result.failure_reasons.push_back(reasons[slot]);
        }
    }
    result.replications_used = static_cast<long>(h.size());
    if (result.failures * 100 > reps) {
        std::string detail;
        for (const auto& reason : result.failure_reasons) detail += "\n  " + reason;
        throw std::runtime_error("run_scenario: " + std::to_string(result.failures) + " of " +
                                 std::to_string(reps) + " replications failed (above the 1% threshold);" +
                                 " first distinct reasons:" + detail);
    }
    if (result.replications_used < 2)
        throw std::runtime_error("run_scenario: fewer than 2 usable replications");

    result.hill_mean = mean(h);
    result.adapted_mean = mean(a);
    result.hill_variance = sample_variance(h);
    result.adapted_variance = sample_variance(a);
    result.reduction_pct = 100.0 * (1.0 - result.adapted_variance / result.hill_variance);
    result.hill_box = five_number(h);
    result.adapted_box = five_number(a);
    return result;
}

struct BoxplotSummary {
    FiveNumber hill;
    FiveNumber adapted;
    long replications_used = 0;
};

inline BoxplotSummary boxplot_summary(const Scenario& sc, int worker_count = 1) {
    const ScenarioResult r = run_scenario(sc, worker_count);
    return BoxplotSummary{r.hill_box, r.adapted_box, r.replications_used};
}

// One cell of a reduction table: a model column crossed with an (n,m,k) row.
struct TableCell {
    std::string label;
    double reduction_pct = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    std::string failure;
    ScenarioResult detail;
};

struct TableGrid {
    std::string name;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<TableCell>> cells;  // [row][col]
    long replications = 0;
    // Set when the replication count is below the 10,000 the reference
    // values were produced with; cells are then too noisy to compare.
    bool low_replication_caveat = false;
};

enum class TableSelection { table1, table2, both };

namespace detail {

struct SamplingSetting {
    long n;
    long m;
    long k;
};

inline const std::vector<SamplingSetting>& table_settings() {
    static const std::vector<SamplingSetting> settings = {
        {1000, 500, 100}, {1000, 1000, 100}, {500, 1000, 50}};
    return settings;
}

inline std::string setting_label(const SamplingSetting& s) {
    return "n=" + std::to_string(s.n) + " m=" + std::to_string(s.m) + " k=" + std::to_string(s.k);
}

inline std::string trim_number(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

inline TableGrid run_table(const std::string& name, int table_ordinal,
                           const std::vector<std::pair<std::string, Scenario>>& columns,
                           long replications, std::uint64_t master_seed, int worker_count) {
    TableGrid grid;
    grid.name = name;
    grid.replications = replications;
    grid.low_replication_caveat = replications < 10000;
    for (const auto& [label, scenario] : columns) {
        (void)scenario;
        grid.col_labels.push_back(label);
    }
    const auto& settings = table_settings();
    for (std::size_t row = 0; row < settings.size(); ++row) {
        grid.row_labels.push_back(setting_label(settings[row]));
        grid.cells.emplace_back();
        for (std::size_t col = 0; col < columns.size(); ++col) {
            Scenario sc = columns[col].second;
            sc.n = settings[row].n;
            sc.m = settings[row].m;
            sc.k = settings[row].k;
            sc.replications = replications;
            sc.master_seed = splitmix64(
                master_seed + static_cast<std::uint64_t>((table_ordinal << 16) |
                                                         (static_cast<int>(row) << 8) |
                                                         static_cast<int>(col)));
            TableCell cell;
            cell.label = columns[col].first;
            try {
                cell.detail = run_scenario(sc, worker_count);
                cell.reduction_pct = cell.detail.reduction_pct;
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.failure = e.what();
            }
            grid.cells.back().push_back(std::move(cell));
        }
    }
    return grid;
}

}  // namespace detail

// Reproduces the simulation-study reduction tables: table 1 is the orthant
// Cauchy family (three bivariate s values, five trivariate (s,r) pairs),
// table 2 the logistic family (theta in {0.1, 0.3, 0.5} at d = 2 and 3).
// All cells use matched tuning. Scenario failures are recorded in their
// cell rather than aborting the grid.
inline std::vector<TableGrid> reproduce_tables(TableSelection which, long replications,
                                               std::uint64_t master_seed, int worker_count = 1) {
    if (replications < 100)
        throw std::invalid_argument("reproduce_tables: need at least 100 replications");
    std::vector<TableGrid> grids;

    if (which == TableSelection::table1 || which == TableSelection::both) {
        std::vector<std::pair<std::string, Scenario>> columns;
        for (double s : {0.0, 0.5, 0.8}) {
            Scenario sc;
            sc.model = CauchyScenario{2, s, 0.0};
            columns.emplace_back("d=2 s=" + detail::trim_number(s), sc);
        }
        const std::pair<double, double> sr[] = {
            {0.0, 0.0}, {0.5, 0.5}, {0.5, 0.0}, {0.8, 0.8}, {0.8, 0.3}};
        for (const auto& [s, r] : sr) {
            Scenario sc;
            sc.model = CauchyScenario{3, s, r};
            columns.emplace_back(
                "d=3 s=" + detail::trim_number(s) + " r=" + detail::trim_number(r), sc);
        }
        grids.push_back(detail::run_table("table-1", 1, columns, replications, master_seed,
                                          worker_count));
    }
    if (which == TableSelection::table2 || which == TableSelection::both) {
        std::vector<std::pair<std::string, Scenario>> columns;
        for (int d : {2, 3})
            for (double theta : {0.1, 0.3, 0.5}) {
                Scenario sc;
                sc.model = LogisticScenario{d, theta};
                columns.emplace_back(
                    "d=" + std::to_string(d) + " theta=" + detail::trim_number(theta), sc);
            }
        grids.push_back(detail::run_table("table-2", 2, columns, replications, master_seed,
                                          worker_count));
    }
    return grids;
}

}  // namespace evt
