#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "evt/matrix.hpp"
#include "evt/tail_dependence.hpp"

namespace evt {

// Population-level inputs of the large-sample theory: the extreme value
// indices of the d variables, the tuning limits nu^2 = lim k/k_plus and
// beta = lim (n k_plus)/((n+m) k), and the pairwise tail copula values at
// the points the theory evaluates them. R(x,y) <= min(x,y), so the (1,1)
// values must lie in [0,1] and the beta-point values in [0,beta].
struct TheoryParams {
    std::vector<double> gammas;
    double nu2 = 0.5;
    double beta = 1.0;
    DependenceValues r;

    TheoryParams(std::vector<double> gammas_, double nu2_, double beta_, DependenceValues r_)
        : gammas(std::move(gammas_)), nu2(nu2_), beta(beta_), r(std::move(r_)) {
        if (static_cast<int>(gammas.size()) != r.dimension())
            throw std::invalid_argument("theory params: need one index per variable");
        for (double g : gammas)
            if (!(g > 0.0)) throw std::invalid_argument("theory params: indices must be positive");
        if (!(nu2 > 0.0) || !(nu2 < 1.0))
            throw std::invalid_argument("theory params: nu^2 must lie in (0,1)");
        if (!(beta > 0.0) || beta > 1.0)
            throw std::invalid_argument("theory params: beta must lie in (0,1]");
        for (const auto& p : r.pairs()) {
            if (p.r11 < 0.0 || p.r11 > 1.0 + 1e-12)
                throw std::invalid_argument("theory params: R(1,1) must lie in [0,1] for pair (" +
                                            std::to_string(p.i) + "," + std::to_string(p.j) + ")");
            if (p.r_one_beta < 0.0 || p.r_one_beta > beta + 1e-12 || p.r_beta_one < 0.0 ||
                p.r_beta_one > beta + 1e-12)
                throw std::invalid_argument("theory params: R at the beta point must lie in [0,beta] for pair (" +
                                            std::to_string(p.i) + "," + std::to_string(p.j) + ")");
        }
    }

    int dimension() const { return r.dimension(); }
};

// Second-order regular variation inputs per variable: scale functions
// lambda_j (limits of sqrt(k) A_j) and indices rho_j <= 0.
struct SecondOrderParams {
    std::vector<double> lambdas;
    std::vector<double> rhos;

    SecondOrderParams(std::vector<double> lambdas_, std::vector<double> rhos_)
        : lambdas(std::move(lambdas_)), rhos(std::move(rhos_)) {
        if (lambdas.size() != rhos.size())
            throw std::invalid_argument("second order params: need a (lambda, rho) pair per variable");
        for (double rho : rhos)
            if (rho > 0.0) throw std::invalid_argument("second order params: rho must be <= 0");
    }
};

// Joint limiting covariance of the 2d-1 Hill estimators entering the
// combined estimator, each normalized by sqrt(k): the target estimator,
// then for each related variable the joint-window estimator (at k) and the
// full-sample estimator (at k_plus). Row/column order is
// [1, 2, 2+, 3, 3+, ..., d, d+].
inline Matrix hill_joint_covariance(const TheoryParams& p) {
    const int d = p.dimension();
    const double nu = std::sqrt(p.nu2);
    const std::size_t size = static_cast<std::size_t>(2 * d - 1);
    // Position of variable v (1-based): target at 0, then plain/plus pairs.
    const auto pos = [](int v, bool plus) {
        return static_cast<std::size_t>(v == 1 ? 0 : 2 * v - 3 + (plus ? 1 : 0));
    };
    Matrix sigma(size, size);
    const auto set = [&](std::size_t a, std::size_t b, double value) {
        sigma(a, b) = value;
        sigma(b, a) = value;
    };

    set(pos(1, false), pos(1, false), p.gammas[0] * p.gammas[0]);
    for (int j = 2; j <= d; ++j) {
        const double gj = p.gammas[static_cast<std::size_t>(j - 1)];
        const double g1j = p.gammas[0] * gj;
        set(pos(j, false), pos(j, false), gj * gj);
        set(pos(j, true), pos(j, true), gj * gj);
        // The two estimators of the same variable overlap in their tail
        // windows; the plain window is a subset of the full one.
        set(pos(j, false), pos(j, true), nu * p.beta * gj * gj);
        set(pos(1, false), pos(j, false), p.r.r11(1, j) * g1j);
        set(pos(1, false), pos(j, true), nu * p.r.r_one_beta(1, j) * g1j);
    }
    for (int i = 2; i <= d; ++i) {
        for (int j = 2; j <= d; ++j) {
            if (i == j) continue;
            const double gij = p.gammas[static_cast<std::size_t>(i - 1)] *
                               p.gammas[static_cast<std::size_t>(j - 1)];
            if (i < j) {
                set(pos(i, false), pos(j, false), p.r.r11(i, j) * gij);
                set(pos(i, true), pos(j, true), p.r.r11(i, j) * gij);
            }
            // Mixed plain/plus entries across variables: the plus estimator
            // evaluates its variable at the beta point.
            set(pos(i, false), pos(j, true), nu * p.r.r_one_beta(i, j) * gij);
        }
    }
    return sigma;
}

// Limiting covariance of the d-vector (target estimator, per-variable
// updates), each normalized by its own index: gamma_i gamma_j H_ij with H
// the normalized update covariance.
inline Matrix update_covariance(const TheoryParams& p) {
    const int d = p.dimension();
    Matrix h = normalized_update_covariance(p.r, p.nu2, p.beta);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *=
                p.gammas[static_cast<std::size_t>(i)] * p.gammas[static_cast<std::size_t>(j)];
    return h;
}

// Limiting variance of sqrt(k) (combined - gamma_1) with one related
// variable:
//   gamma_1^2 (1 - (R(1,1) - nu^2 R(1,beta))^2 / (1 + nu^2 - 2 nu^2 beta)).
inline double adapted_variance_bivariate(const TheoryParams& p) {
    if (p.dimension() != 2)
        throw std::invalid_argument("adapted_variance_bivariate: need exactly two variables");
    const double q = p.r.r11(1, 2) - p.nu2 * p.r.r_one_beta(1, 2);
    const double h = 1.0 + p.nu2 - 2.0 * p.nu2 * p.beta;
    return p.gammas[0] * p.gammas[0] * (1.0 - q * q / h);
}

// Limiting variance of the combined estimator with any number of related
// variables (the display form of the general theory).
inline double adapted_variance(const TheoryParams& p) {
    const Matrix h = normalized_update_covariance(p.r, p.nu2, p.beta);
    const Matrix hinv = invert(h);
    return p.gammas[0] * p.gammas[0] * combined_variance_ratio(h, hinv, p.r, p.nu2);
}

// Same quantity computed as the quadratic form a' S a, with S the update
// covariance and a the combination coefficients (1, (gamma_1/gamma_j)
// Hinv_1j/Hinv_11). Exists as an independent route for cross-checking
// adapted_variance.
inline double adapted_variance_quadratic(const TheoryParams& p) {
    const int d = p.dimension();
    const Matrix h = normalized_update_covariance(p.r, p.nu2, p.beta);
    const Matrix hinv = invert(h);
    const Matrix s = update_covariance(p);
    std::vector<double> a(static_cast<std::size_t>(d));
    a[0] = 1.0;
    for (int j = 2; j <= d; ++j)
        a[static_cast<std::size_t>(j - 1)] = p.gammas[0] /
                                             p.gammas[static_cast<std::size_t>(j - 1)] *
                                             hinv(0, static_cast<std::size_t>(j - 1)) / hinv(0, 0);
    double out = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out += a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)] *
                   s(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return out;
}

// Limiting mean of sqrt(k) (combined - gamma_1) under second-order regular
// variation:
//   lambda_1/(1-rho_1) + sum_j (gamma_1/gamma_j) (Hinv_1j/Hinv_11)
//                        lambda_j (beta^(-rho_j) - 1)/(1 - rho_j).
inline double adapted_bias(const TheoryParams& p, const SecondOrderParams& so) {
    const int d = p.dimension();
    if (static_cast<int>(so.lambdas.size()) != d)
        throw std::invalid_argument("adapted_bias: need second-order inputs for every variable");
    const Matrix h = normalized_update_covariance(p.r, p.nu2, p.beta);
    const Matrix hinv = invert(h);
    double out = so.lambdas[0] / (1.0 - so.rhos[0]);
    for (int j = 2; j <= d; ++j) {
        const double rho = so.rhos[static_cast<std::size_t>(j - 1)];
        out += p.gammas[0] / p.gammas[static_cast<std::size_t>(j - 1)] *
               hinv(0, static_cast<std::size_t>(j - 1)) / hinv(0, 0) *
               so.lambdas[static_cast<std::size_t>(j - 1)] *
               (std::pow(p.beta, -rho) - 1.0) / (1.0 - rho);
    }
    return out;
}

// Fraction of the Hill estimator's limiting variance removed by the
// combination: 1 - sigma^2/gamma_1^2.
inline double variance_reduction(const TheoryParams& p) {
    return 1.0 - adapted_variance(p) / (p.gammas[0] * p.gammas[0]);
}

// Closed forms of the reduction under matched tuning (beta = 1).
inline double matched_reduction_bivariate(double nu2, double r11) {
    return (1.0 - nu2) * r11 * r11;
}

inline double matched_reduction_trivariate(double nu2, double r12, double r13, double r23) {
    const double denom = 1.0 - r23 * r23;
    if (std::fabs(denom) < 1e-12)
        throw std::invalid_argument("matched_reduction_trivariate: related variables are perfectly dependent");
    return (1.0 - nu2) * (r12 * r12 + r13 * r13 - 2.0 * r12 * r13 * r23) / denom;
}

}  // namespace evt
