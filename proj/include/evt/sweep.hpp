#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evt/adapted.hpp"
#include "evt/estimators.hpp"
#include "evt/paired_sample.hpp"

namespace evt {

// One estimation run per k over an inclusive range; a single k is the
// degenerate range k..k. When the sample has no extra observations the
// combined estimator is skipped and only the Hill column is filled.
struct SweepConfig {
    long k_lo = 0;
    long k_hi = 0;
    std::optional<long> k_plus;  // fixed k_plus for every k; empty: matched rule
    bool with_quantile = false;
    double p = 0.01;  // tail probability for the quantile columns
};

struct SweepRow {
    long k = 0;
    long k_plus = 0;
    double gamma_hill = 0.0;
    std::optional<double> gamma_adapted;
    std::optional<double> std_error;
    std::optional<TailDependenceSet> dependence;
    std::optional<double> quantile_hill;
    std::optional<double> quantile_adapted;
    std::vector<std::string> warnings;
    std::string error;  // nonempty when estimation failed at this k
};

struct SweepResult {
    int d = 2;
    std::vector<SweepRow> rows;
    long rows_ok = 0;
    std::optional<double> avg_hill;
    std::optional<double> avg_adapted;
    std::optional<double> avg_quantile_hill;
    std::optional<double> avg_quantile_adapted;
};

inline SweepResult run_sweep(const PairedSample& sample, const SweepConfig& config) {
    sample.validate();
    if (config.k_lo < 1 || config.k_hi < config.k_lo)
        throw std::invalid_argument("sweep: need 1 <= k_lo <= k_hi");
    if (config.with_quantile && (!(config.p > 0.0) || config.p >= 1.0))
        throw std::invalid_argument("sweep: tail probability must lie in (0,1)");

    const bool hill_only = sample.m() == 0 && !config.k_plus;
    const SortedSample sx = order_statistics(sample.x);

    SweepResult result;
    result.d = sample.d();
    double sum_hill = 0.0;
    double sum_adapted = 0.0;
    double sum_qh = 0.0;
    double sum_qa = 0.0;
    long adapted_ok = 0;

    for (long k = config.k_lo; k <= config.k_hi; ++k) {
        SweepRow row;
        row.k = k;
        try {
            // Hill first: a failure in the combined stage still leaves the
            // plain estimate in the row.
            row.gamma_hill = hill(sx, k);
            if (hill_only) {
                row.k_plus = 0;
                row.warnings.push_back("no extra related-variable observations; combined estimator skipped");
            } else {
                const TuningParams tuning = config.k_plus
                                                ? TuningParams::checked(k, *config.k_plus,
                                                                        sample.n(), sample.m())
                                                : TuningParams::matched(k, sample.n(), sample.m());
                row.k_plus = tuning.k_plus;
                const EstimateReport report = adapted_hill(sample, tuning);
                row.gamma_adapted = report.gamma_adapted;
                row.std_error = report.std_error;
                row.dependence = report.dependence;
                row.warnings = report.warnings;
            }
            if (config.with_quantile) {
                row.quantile_hill = weissman_quantile(sx, k, config.p, row.gamma_hill);
                if (row.gamma_adapted)
                    row.quantile_adapted = weissman_quantile(sx, k, config.p, *row.gamma_adapted);
            }
            ++result.rows_ok;
            sum_hill += row.gamma_hill;
            if (row.quantile_hill) sum_qh += *row.quantile_hill;
            if (row.gamma_adapted) {
                ++adapted_ok;
                sum_adapted += *row.gamma_adapted;
                if (row.quantile_adapted) sum_qa += *row.quantile_adapted;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        result.rows.push_back(std::move(row));
    }

    if (result.rows_ok > 0) {
        result.avg_hill = sum_hill / static_cast<double>(result.rows_ok);
        if (config.with_quantile) result.avg_quantile_hill = sum_qh / static_cast<double>(result.rows_ok);
    }
    if (adapted_ok > 0) {
        result.avg_adapted = sum_adapted / static_cast<double>(adapted_ok);
        if (config.with_quantile) result.avg_quantile_adapted = sum_qa / static_cast<double>(adapted_ok);
    }
    return result;
}

}  // namespace evt
