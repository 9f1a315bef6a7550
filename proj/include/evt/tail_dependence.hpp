#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evt/estimators.hpp"
#include "evt/matrix.hpp"

namespace evt {

// Empirical tail copula of a pair of samples at evaluation point (x,y):
//   (1/k) #{ i : X_i >= X_(n-floor(kx)+1,n)  and  Y_i >= Y_(n-floor(ky)+1,n) }.
// floor(k*x) is snapped to the nearest integer when within 1e-9 so that
// evaluation points which are exact rationals of the sample sizes do not
// fall on the wrong side of the floor.
inline long tail_copula_index(long k, double x) {
    return static_cast<long>(std::floor(static_cast<double>(k) * x + 1e-9));
}

inline double tail_copula(const std::vector<double>& xs, const std::vector<double>& ys, long k,
                          double x, double y) {
    const long n = static_cast<long>(xs.size());
    if (static_cast<long>(ys.size()) != n)
        throw std::invalid_argument("tail_copula: samples must have equal length");
    check_tail_count(k, n, "tail_copula");
    const long a = tail_copula_index(k, x);
    const long b = tail_copula_index(k, y);
    if (a < 1 || a > n || b < 1 || b > n)
        throw std::invalid_argument("tail_copula: evaluation point (" + std::to_string(x) + "," +
                                    std::to_string(y) + ") gives an order-statistic index outside 1.." +
                                    std::to_string(n));
    const SortedSample sx = order_statistics(xs);
    const SortedSample sy = order_statistics(ys);
    const double tx = sx.values[static_cast<std::size_t>(n - a)];
    const double ty = sy.values[static_cast<std::size_t>(n - b)];
    long count = 0;
    for (long i = 0; i < n; ++i)
        if (xs[static_cast<std::size_t>(i)] >= tx && ys[static_cast<std::size_t>(i)] >= ty) ++count;
    return static_cast<double>(count) / static_cast<double>(k);
}

// Estimated (or theoretical) pairwise tail dependence between variables i
// and j (1-based, i < j), at the evaluation points the combined estimator
// needs: (1,1), (1,beta) and (beta,1), where the first coordinate belongs
// to variable i.
struct PairDependence {
    int i = 0;
    int j = 0;
    double r11 = 0.0;
    double r_one_beta = 0.0;
    double r_beta_one = 0.0;
};

// Pairwise tail dependence values for d variables, with the argument-order
// convention R_ji(x,y) = R_ij(y,x) handled by the accessors.
class DependenceValues {
public:
    DependenceValues() = default;

    DependenceValues(int dimension, std::vector<PairDependence> pairs)
        : d_(dimension), pairs_(std::move(pairs)) {
        const std::size_t expected = static_cast<std::size_t>(d_) * (d_ - 1) / 2;
        if (d_ < 2 || pairs_.size() != expected)
            throw std::invalid_argument("dependence values: need one entry per pair i<j");
        std::size_t idx = 0;
        for (int i = 1; i <= d_; ++i)
            for (int j = i + 1; j <= d_; ++j, ++idx)
                if (pairs_[idx].i != i || pairs_[idx].j != j)
                    throw std::invalid_argument("dependence values: pairs must be in lexicographic order");
    }

    int dimension() const { return d_; }
    const std::vector<PairDependence>& pairs() const { return pairs_; }

    double r11(int i, int j) const { return at(i, j).r11; }

    // R_ij(1, beta). For i > j this is the stored R_ji(beta, 1).
    double r_one_beta(int i, int j) const {
        return i < j ? at(i, j).r_one_beta : at(j, i).r_beta_one;
    }

    // R_ij(beta, 1). For i > j this is the stored R_ji(1, beta).
    double r_beta_one(int i, int j) const {
        return i < j ? at(i, j).r_beta_one : at(j, i).r_one_beta;
    }

private:
    const PairDependence& at(int i, int j) const {
        if (i > j) std::swap(i, j);
        if (i < 1 || j > d_ || i == j)
            throw std::invalid_argument("dependence values: pair index out of range");
        const std::size_t idx =
            static_cast<std::size_t>((i - 1) * (2 * d_ - i) / 2 + (j - i) - 1);
        return pairs_[idx];
    }

    int d_ = 0;
    std::vector<PairDependence> pairs_;
};

// Pairwise tail dependence estimated from a joint sample, together with the
// tuning ratios it was evaluated at.
struct TailDependenceSet {
    double nu2 = 0.0;
    double beta_hat = 1.0;
    bool matched = true;
    DependenceValues values;
};

// Estimates the tail copula of every variable pair of an n x d data matrix
// at the evaluation points required for the tuning in `t`. Column 0 is the
// target variable; the matched case (beta == 1) needs only the point (1,1)
// and the off-point values are aliases of it. The order-statistic index of
// the beta coordinate, floor(k * beta), is computed exactly as
// (n * k_plus) / (n + m) to keep integer-valued products exact.
inline TailDependenceSet tail_dependence_set(const Matrix& data, const TuningParams& t) {
    const long n = static_cast<long>(data.rows());
    const int d = static_cast<int>(data.cols());
    if (d < 2) throw std::invalid_argument("tail_dependence_set: need at least two columns");
    if (n != t.n) throw std::invalid_argument("tail_dependence_set: data rows must equal tuning n");
    check_tail_count(t.k, n, "tail_dependence_set");

    const bool matched = t.is_matched();
    const long idx_one = t.k;
    const long idx_beta = matched ? t.k : (t.n * t.k_plus) / (t.n + t.m);

    // Threshold order statistic per column and index.
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) {
        auto& col = cols[static_cast<std::size_t>(c)];
        col.resize(static_cast<std::size_t>(n));
        for (long r = 0; r < n; ++r)
            col[static_cast<std::size_t>(r)] = data(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        std::sort(col.begin(), col.end());
    }
    const auto threshold = [&](int c, long idx) {
        return cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(n - idx)];
    };
    const auto count_pair = [&](int ci, int cj, long ai, long aj) {
        const double ti = threshold(ci, ai);
        const double tj = threshold(cj, aj);
        long count = 0;
        for (long r = 0; r < n; ++r)
            if (data(static_cast<std::size_t>(r), static_cast<std::size_t>(ci)) >= ti &&
                data(static_cast<std::size_t>(r), static_cast<std::size_t>(cj)) >= tj)
                ++count;
        return static_cast<double>(count) / static_cast<double>(t.k);
    };

    std::vector<PairDependence> pairs;
    pairs.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int i = 1; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
            if (idx_beta < 1 || idx_beta > n)
                throw std::invalid_argument(
                    "tail_dependence_set: evaluation point (1,beta) for pair (" + std::to_string(i) +
                    "," + std::to_string(j) + ") gives order-statistic index " +
                    std::to_string(idx_beta) + " outside 1.." + std::to_string(n));
            PairDependence p;
            p.i = i;
            p.j = j;
            p.r11 = count_pair(i - 1, j - 1, idx_one, idx_one);
            if (matched) {
                p.r_one_beta = p.r11;
                p.r_beta_one = p.r11;
            } else {
                p.r_one_beta = count_pair(i - 1, j - 1, idx_one, idx_beta);
                p.r_beta_one = count_pair(i - 1, j - 1, idx_beta, idx_one);
            }
            pairs.push_back(p);
        }
    }
    return TailDependenceSet{t.nu2(), t.beta_hat(), matched, DependenceValues(d, std::move(pairs))};
}

// Covariance matrix, normalized by the index and scaled by k, of the d
// pseudo-estimators the combined estimator is built from: the target Hill
// estimator and, for each related variable, the update nu^2 * (full-sample
// Hill) - (joint-window Hill), all divided by their index. Entries are
// closed functions of (nu^2, beta) and the pairwise tail copula values.
inline Matrix normalized_update_covariance(const DependenceValues& r, double nu2, double beta) {
    const int d = r.dimension();
    Matrix h(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    h(0, 0) = 1.0;
    const double diag = 1.0 + nu2 - 2.0 * nu2 * beta;
    for (int j = 2; j <= d; ++j) {
        h(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(j - 1)) = diag;
        const double top = nu2 * r.r_one_beta(1, j) - r.r11(1, j);
        h(0, static_cast<std::size_t>(j - 1)) = top;
        h(static_cast<std::size_t>(j - 1), 0) = top;
    }
    for (int i = 2; i <= d; ++i) {
        for (int j = i + 1; j <= d; ++j) {
            const double off = (1.0 + nu2) * r.r11(i, j) -
                               nu2 * (r.r_one_beta(i, j) + r.r_beta_one(i, j));
            h(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = off;
            h(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)) = off;
        }
    }
    return h;
}

inline Matrix normalized_update_covariance(const TailDependenceSet& tds) {
    return normalized_update_covariance(tds.values, tds.nu2, tds.beta_hat);
}

// Ratio var(combined)/var(Hill) implied by the large-sample theory, as a
// closed function of the normalized update covariance H, its inverse, and
// the pairwise dependence values:
//   1 - (1/(Hinv_11)^2) [ 2 Hinv_11 sum_j Hinv_1j (R_1j(1,1) - nu^2 R_1j(1,beta))
//                         - h sum_j Hinv_1j^2
//                         - 2 sum_{2<=i<j} H_ij Hinv_1i Hinv_1j ]
// where h is the common diagonal entry of H beyond the first and the sums
// run over the related variables.
inline double combined_variance_ratio(const Matrix& h, const Matrix& hinv,
                                      const DependenceValues& r, double nu2) {
    const int d = r.dimension();
    const double hinv11 = hinv(0, 0);
    const double diag = h(1, 1);
    double cross = 0.0;
    double squares = 0.0;
    for (int j = 2; j <= d; ++j) {
        const double hinv1j = hinv(0, static_cast<std::size_t>(j - 1));
        cross += hinv1j * (r.r11(1, j) - nu2 * r.r_one_beta(1, j));
        squares += hinv1j * hinv1j;
    }
    double pair_terms = 0.0;
    for (int i = 2; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j)
            pair_terms += h(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) *
                          hinv(0, static_cast<std::size_t>(i - 1)) *
                          hinv(0, static_cast<std::size_t>(j - 1));
    return 1.0 - (2.0 * hinv11 * cross - diag * squares - 2.0 * pair_terms) / (hinv11 * hinv11);
}

}  // namespace evt
