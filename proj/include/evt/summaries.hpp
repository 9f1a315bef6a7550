#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace evt {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Unbiased sample variance (n-1 denominator), two-pass for stability.
inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least two values");
    const double mu = mean(xs);
    double sum = 0.0;
    for (double x : xs) sum += (x - mu) * (x - mu);
    return sum / static_cast<double>(xs.size() - 1);
}

// Linear-interpolation quantile (the common "type 7" definition) of an
// already sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p must lie in [0,1]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// min, lower quartile, median, upper quartile, max, plus the count of
// points outside the 1.5 IQR whiskers.
struct FiveNumber {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    long outliers = 0;
};

inline FiveNumber five_number(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("five_number: empty sample");
    std::sort(xs.begin(), xs.end());
    FiveNumber f;
    f.min = xs.front();
    f.q1 = quantile_sorted(xs, 0.25);
    f.median = quantile_sorted(xs, 0.5);
    f.q3 = quantile_sorted(xs, 0.75);
    f.max = xs.back();
    const double iqr = f.q3 - f.q1;
    const double lo = f.q1 - 1.5 * iqr;
    const double hi = f.q3 + 1.5 * iqr;
    for (double x : xs)
        if (x < lo || x > hi) ++f.outliers;
    return f;
}

}  // namespace evt
