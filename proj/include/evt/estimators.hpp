#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace evt {

// Ascending order statistics of a sample. values[i] is the (i+1)-th
// smallest observation.
struct SortedSample {
    std::vector<double> values;

    long size() const { return static_cast<long>(values.size()); }
};

inline SortedSample order_statistics(const std::vector<double>& raw) {
    SortedSample s{raw};
    std::stable_sort(s.values.begin(), s.values.end());
    return s;
}

inline void check_tail_count(long k, long n, const char* who) {
    if (k < 1 || k > n - 1)
        throw std::invalid_argument(std::string(who) + ": tail count k must satisfy 1 <= k <= n-1 (k=" +
                                    std::to_string(k) + ", n=" + std::to_string(n) + ")");
}

// Hill estimator of the extreme value index from the k largest
// observations: the mean of log(X_(n-i+1)) - log(X_(n-k)) over the top k.
// Requires a positive threshold order statistic so the logs exist.
inline double hill(const SortedSample& sample, long k) {
    const long n = sample.size();
    check_tail_count(k, n, "hill");
    const double threshold = sample.values[static_cast<std::size_t>(n - k - 1)];
    if (!(threshold > 0.0))
        throw std::domain_error("hill: threshold order statistic must be positive");
    double sum = 0.0;
    for (long i = 0; i < k; ++i)
        sum += std::log(sample.values[static_cast<std::size_t>(n - 1 - i)]);
    return sum / static_cast<double>(k) - std::log(threshold);
}

// Extrapolated high quantile at tail probability p, anchored at the k-th
// upper order statistic: X_(n-k) * (k/(n p))^gamma.
inline double weissman_quantile(const SortedSample& sample, long k, double p, double gamma) {
    const long n = sample.size();
    check_tail_count(k, n, "weissman_quantile");
    if (!(p > 0.0) || p >= 1.0)
        throw std::invalid_argument("weissman_quantile: tail probability must lie in (0,1)");
    const double anchor = sample.values[static_cast<std::size_t>(n - k - 1)];
    return anchor * std::pow(static_cast<double>(k) / (static_cast<double>(n) * p), gamma);
}

// Arithmetic mean of a per-k estimate over an inclusive k range. Used to
// smooth the choice of tail count.
template <typename EstimatorAtK>
double average_over_k(long k_lo, long k_hi, EstimatorAtK&& estimate) {
    if (k_lo < 1 || k_hi < k_lo)
        throw std::invalid_argument("average_over_k: need 1 <= k_lo <= k_hi");
    double sum = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) sum += estimate(k);
    return sum / static_cast<double>(k_hi - k_lo + 1);
}

// Tail counts for a pair of samples: k upper order statistics out of n joint
// observations, k_plus out of the n+m observations available for the related
// variables alone. The ratios k/k_plus and (n k_plus)/((n+m) k) are the
// nu^2 and beta quantities of the combined estimator; both are formed from
// exact integer products so that matched configurations give beta == 1.
struct TuningParams {
    long k = 0;
    long k_plus = 0;
    long n = 0;
    long m = 0;

    static TuningParams checked(long k, long k_plus, long n, long m) {
        if (n < 3) throw std::invalid_argument("tuning: need n >= 3");
        if (m < 0) throw std::invalid_argument("tuning: need m >= 0");
        if (k < 1 || k > n - 1)
            throw std::invalid_argument("tuning: need 1 <= k <= n-1 (k=" + std::to_string(k) +
                                        ", n=" + std::to_string(n) + ")");
        if (k_plus <= k || k_plus > n + m - 1)
            throw std::invalid_argument("tuning: need k < k_plus <= n+m-1 (k_plus=" +
                                        std::to_string(k_plus) + ")");
        return TuningParams{k, k_plus, n, m};
    }

    // Matched rule: k_plus = round(k (n+m)/n) with ties rounded up, so the
    // two tail fractions k/n and k_plus/(n+m) agree as closely as integers
    // allow. Exact when n divides k m.
    static TuningParams matched(long k, long n, long m) {
        if (n < 1) throw std::invalid_argument("tuning: need n >= 1");
        const long k_plus = (2 * k * (n + m) + n) / (2 * n);
        return checked(k, k_plus, n, m);
    }

    double nu2() const { return static_cast<double>(k) / static_cast<double>(k_plus); }

    double beta_hat() const {
        return static_cast<double>(n * k_plus) / static_cast<double>((n + m) * k);
    }

    bool is_matched() const { return k * (n + m) == k_plus * n; }
};

}  // namespace evt
