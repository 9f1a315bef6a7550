#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evt/errors.hpp"
#include "evt/estimators.hpp"
#include "evt/matrix.hpp"
#include "evt/paired_sample.hpp"
#include "evt/tail_dependence.hpp"

namespace evt {

// Ingredients of one related variable's contribution to the combined
// estimate. `weight` is the dependence-driven combination weight; the full
// multiplier on (gamma_plus - gamma) also carries the scale correction
// gamma1/gamma_plus and is stored as `coefficient`.
struct RelatedVariableEstimate {
    double gamma = 0.0;       // Hill estimate from the n joint observations at k
    double gamma_plus = 0.0;  // Hill estimate from all n+m observations at k_plus
    double weight = 0.0;
    double coefficient = 0.0;
};

struct EstimateReport {
    double gamma1_hill = 0.0;     // plain Hill estimate of the target variable
    double gamma_adapted = 0.0;   // combined estimate
    std::vector<RelatedVariableEstimate> related;
    TuningParams tuning;
    TailDependenceSet dependence;
    double plugin_variance_ratio = 1.0;  // estimated var(combined)/var(Hill)
    double plugin_reduction = 0.0;       // 1 - ratio
    double std_error = 0.0;              // large-sample standard error of the combined estimate
    std::vector<std::string> warnings;
};

inline double combined_estimate(double gamma1, const std::vector<RelatedVariableEstimate>& related) {
    double out = gamma1;
    for (const auto& r : related) out += r.coefficient * (r.gamma_plus - r.gamma);
    return out;
}

// Combination weight for a single related variable:
//   (R(1,1) - nu^2 R(1,beta)) / (1 + nu^2 - 2 nu^2 beta).
// In the matched case (beta = 1) this reduces to R(1,1).
inline double bivariate_update_weight(double r11, double r_one_beta, double nu2, double beta) {
    const double h = 1.0 + nu2 - 2.0 * nu2 * beta;
    if (std::fabs(h) < 1e-12)
        throw DegenerateDenominatorError("combined estimator: normalizing constant 1+nu^2-2 nu^2 beta is zero");
    return (r11 - nu2 * r_one_beta) / h;
}

// Matched two-related-variable weights, eliminating the redundancy between
// the two updates: ((R12 - R13 R23)/(1 - R23^2), (R13 - R12 R23)/(1 - R23^2)).
inline std::pair<double, double> matched_trivariate_weights(double r12, double r13, double r23) {
    const double denom = 1.0 - r23 * r23;
    if (std::fabs(denom) < 1e-12)
        throw DegenerateDenominatorError(
            "combined estimator: related variables are perfectly tail dependent (R23^2 = 1)");
    return {(r12 - r13 * r23) / denom, (r13 - r12 * r23) / denom};
}

namespace detail {

enum class WeightRule { matrix, bivariate, matched_bivariate, matched_trivariate };

inline EstimateReport adapted_core(const PairedSample& sample, const TuningParams& t,
                                   WeightRule rule) {
    sample.validate();
    if (t.n != sample.n() || t.m != sample.m())
        throw std::invalid_argument("combined estimator: tuning (n,m) must match the sample");

    EstimateReport report;
    report.tuning = t;

    const SortedSample sx = order_statistics(sample.x);
    report.gamma1_hill = hill(sx, t.k);

    const int d = sample.d();
    report.related.resize(static_cast<std::size_t>(d - 1));
    for (int j = 0; j < d - 1; ++j) {
        auto& rel = report.related[static_cast<std::size_t>(j)];
        rel.gamma = hill(order_statistics(sample.related_joint(static_cast<std::size_t>(j))), t.k);
        rel.gamma_plus =
            hill(order_statistics(sample.related_full(static_cast<std::size_t>(j))), t.k_plus);
        if (rel.gamma_plus < 1e-10)
            throw DegenerateDenominatorError("combined estimator: full-sample Hill estimate of related variable " +
                                             std::to_string(j + 2) + " is zero");
    }

    report.dependence = tail_dependence_set(sample.joint_matrix(), t);
    const DependenceValues& r = report.dependence.values;
    const double nu2 = t.nu2();
    const double beta = t.beta_hat();

    if (beta > 1.0 + 1e-12)
        report.warnings.push_back(
            "beta_hat exceeds 1 (k_plus/(n+m) > k/n); the asymptotic theory does not cover this tuning");

    switch (rule) {
        case WeightRule::matrix: {
            const Matrix h = normalized_update_covariance(r, nu2, beta);
            const Matrix hinv = invert(h);
            if (std::fabs(hinv(0, 0)) < 1e-12)
                throw DegenerateDenominatorError("combined estimator: leading entry of inverse covariance is zero");
            for (int j = 2; j <= d; ++j)
                report.related[static_cast<std::size_t>(j - 2)].weight =
                    hinv(0, static_cast<std::size_t>(j - 1)) / hinv(0, 0);
            report.plugin_variance_ratio = combined_variance_ratio(h, hinv, r, nu2);
            break;
        }
        case WeightRule::bivariate:
        case WeightRule::matched_bivariate: {
            const double r11 = r.r11(1, 2);
            const double r1b = r.r_one_beta(1, 2);
            const double w = rule == WeightRule::matched_bivariate
                                 ? r11
                                 : bivariate_update_weight(r11, r1b, nu2, beta);
            report.related[0].weight = w;
            const double h = 1.0 + nu2 - 2.0 * nu2 * beta;
            report.plugin_variance_ratio = 1.0 - (r11 - nu2 * r1b) * (r11 - nu2 * r1b) / h;
            break;
        }
        case WeightRule::matched_trivariate: {
            const auto [w2, w3] = matched_trivariate_weights(r.r11(1, 2), r.r11(1, 3), r.r11(2, 3));
            report.related[0].weight = w2;
            report.related[1].weight = w3;
            const double r12 = r.r11(1, 2);
            const double r13 = r.r11(1, 3);
            const double r23 = r.r11(2, 3);
            report.plugin_variance_ratio =
                1.0 - (1.0 - nu2) * (r12 * r12 + r13 * r13 - 2.0 * r12 * r13 * r23) /
                          (1.0 - r23 * r23);
            break;
        }
    }

    for (auto& rel : report.related) rel.coefficient = report.gamma1_hill / rel.gamma_plus * rel.weight;
    report.gamma_adapted = combined_estimate(report.gamma1_hill, report.related);
    report.plugin_reduction = 1.0 - report.plugin_variance_ratio;

    if (report.plugin_variance_ratio < 0.0) {
        report.warnings.push_back(
            "plug-in variance ratio is negative (estimated reduction exceeds 100%); standard error unavailable");
        report.std_error = std::nan("");
    } else {
        report.std_error = std::fabs(report.gamma_adapted) *
                           std::sqrt(report.plugin_variance_ratio / static_cast<double>(t.k));
    }
    return report;
}

}  // namespace detail

// Combined estimator of the target extreme value index using every related
// variable, with weights from the inverse of the normalized update
// covariance matrix. Works for any number of related variables and any
// valid tuning.
inline EstimateReport adapted_hill(const PairedSample& sample, const TuningParams& t) {
    return detail::adapted_core(sample, t, detail::WeightRule::matrix);
}

// Single related variable, written in the direct form
//   gamma1 + (gamma1/gamma2_plus) w (gamma2_plus - gamma2),
//   w = (R(1,1) - nu^2 R(1,beta)) / (1 + nu^2 - 2 nu^2 beta).
inline EstimateReport adapted_hill_bivariate(const PairedSample& sample, const TuningParams& t) {
    if (sample.d() != 2)
        throw std::invalid_argument("bivariate combined estimator: sample must have exactly one related variable");
    return detail::adapted_core(sample, t, detail::WeightRule::bivariate);
}

// Single related variable under matched tuning (k/n = k_plus/(n+m)), where
// the combination weight collapses to R(1,1).
inline EstimateReport adapted_hill_matched_bivariate(const PairedSample& sample,
                                                     const TuningParams& t) {
    if (sample.d() != 2)
        throw std::invalid_argument("matched bivariate combined estimator: sample must have exactly one related variable");
    if (!t.is_matched())
        throw std::invalid_argument("matched bivariate combined estimator: tuning is not matched (k (n+m) != k_plus n)");
    return detail::adapted_core(sample, t, detail::WeightRule::matched_bivariate);
}

// Two related variables under matched tuning, with the closed-form weights
// of matched_trivariate_weights.
inline EstimateReport adapted_hill_matched_trivariate(const PairedSample& sample,
                                                      const TuningParams& t) {
    if (sample.d() != 3)
        throw std::invalid_argument("matched trivariate combined estimator: sample must have exactly two related variables");
    if (!t.is_matched())
        throw std::invalid_argument("matched trivariate combined estimator: tuning is not matched (k (n+m) != k_plus n)");
    return detail::adapted_core(sample, t, detail::WeightRule::matched_trivariate);
}

}  // namespace evt
