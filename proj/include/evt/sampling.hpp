#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "evt/matrix.hpp"
#include "evt/rng.hpp"

namespace evt {

// Scale matrix of an elliptical (Cauchy) family: symmetric positive
// definite with unit diagonal. Validated and Cholesky-factored once at
// construction.
class ScaleMatrix {
public:
    explicit ScaleMatrix(Matrix entries) : entries_(std::move(entries)) {
        const std::size_t d = entries_.rows();
        if (d < 2 || entries_.cols() != d)
            throw std::invalid_argument("scale matrix must be square with dimension >= 2");
        for (std::size_t i = 0; i < d; ++i) {
            if (std::fabs(entries_(i, i) - 1.0) > 1e-12)
                throw std::invalid_argument("scale matrix must have unit diagonal");
            for (std::size_t j = 0; j < i; ++j)
                if (std::fabs(entries_(i, j) - entries_(j, i)) > 1e-12)
                    throw std::invalid_argument("scale matrix must be symmetric");
        }
        chol_ = cholesky_lower(entries_);  // throws if not positive definite
    }

    // d x d matrix with a common off-diagonal entry.
    static ScaleMatrix equicorrelated(int dimension, double s) {
        if (dimension < 2) throw std::invalid_argument("scale matrix dimension must be >= 2");
        Matrix m(static_cast<std::size_t>(dimension), static_cast<std::size_t>(dimension), s);
        for (int i = 0; i < dimension; ++i) m(i, i) = 1.0;
        return ScaleMatrix(std::move(m));
    }

    static ScaleMatrix bivariate(double s) { return equicorrelated(2, s); }

    // 3 x 3 with entry s between variable 1 and each of the others and r
    // between variables 2 and 3.
    static ScaleMatrix trivariate(double s, double r) {
        Matrix m = Matrix::identity(3);
        m(0, 1) = m(1, 0) = s;
        m(0, 2) = m(2, 0) = s;
        m(1, 2) = m(2, 1) = r;
        return ScaleMatrix(std::move(m));
    }

    int dimension() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    const Matrix& cholesky() const { return chol_; }

private:
    Matrix entries_;
    Matrix chol_;
};

// Parameters of the symmetric logistic max-stable family with joint CDF
// F(x) = exp(-(sum_i x_i^(-1/theta))^theta). theta in (0,1]; theta = 1 is
// complete tail independence, theta -> 0 complete dependence. Margins are
// unit Frechet, F_i(x) = exp(-1/x).
struct LogisticParam {
    int dimension = 2;
    double theta = 0.5;

    LogisticParam(int dimension_, double theta_) : dimension(dimension_), theta(theta_) {
        if (dimension < 2) throw std::invalid_argument("logistic dimension must be >= 2");
        if (!(theta > 0.0) || theta > 1.0)
            throw std::invalid_argument("logistic dependence parameter must lie in (0,1]");
    }
};

// Pareto(1) variate with tail index gamma: P(X > x) = x^(-1/gamma), x >= 1.
inline double pareto_from_uniform(double gamma, double u) { return std::pow(u, -gamma); }

inline std::vector<double> sample_pareto(double gamma, std::size_t count, RngStream& stream) {
    if (!(gamma > 0.0)) throw std::invalid_argument("pareto tail index must be positive");
    std::vector<double> out(count);
    for (auto& x : out) x = pareto_from_uniform(gamma, stream.uniform01());
    return out;
}

inline std::vector<double> sample_pareto(double gamma, std::size_t count, const StreamSpec& spec) {
    RngStream stream(spec);
    return sample_pareto(gamma, count, stream);
}

// Positive stable variate with Laplace transform E exp(-t S) = exp(-t^theta),
// built from a uniform angle on (0,pi) and a unit exponential. theta = 1 is
// the degenerate point mass at 1.
inline double positive_stable_from(double theta, double angle, double exp_draw) {
    if (theta == 1.0) return 1.0;
    const double sin_angle = std::sin(angle);
    return std::pow(std::sin((1.0 - theta) * angle) / exp_draw, (1.0 - theta) / theta) *
           std::sin(theta * angle) / std::pow(sin_angle, 1.0 / theta);
}

inline double positive_stable_draw(double theta, RngStream& stream) {
    if (theta == 1.0) return 1.0;
    const double pi = 3.14159265358979323846;
    const double angle = pi * stream.uniform01();
    return positive_stable_from(theta, angle, stream.exponential());
}

inline std::vector<double> sample_positive_stable(double theta, std::size_t count,
                                                  const StreamSpec& spec) {
    if (!(theta > 0.0) || theta > 1.0)
        throw std::invalid_argument("stable exponent must lie in (0,1]");
    RngStream stream(spec);
    std::vector<double> out(count);
    for (auto& s : out) s = positive_stable_draw(theta, stream);
    return out;
}

// One row of the symmetric logistic distribution via the stable mixture:
// given S positive stable with exponent theta and iid unit exponentials E_i,
// the vector ((S/E_1)^theta, ..., (S/E_d)^theta) has the logistic CDF above.
inline void logistic_row(const LogisticParam& param, RngStream& stream, double* row) {
    const double s = positive_stable_draw(param.theta, stream);
    for (int i = 0; i < param.dimension; ++i)
        row[i] = std::pow(s / stream.exponential(), param.theta);
}

inline Matrix sample_logistic(const LogisticParam& param, std::size_t count, RngStream& stream) {
    Matrix out(count, static_cast<std::size_t>(param.dimension));
    std::vector<double> row(static_cast<std::size_t>(param.dimension));
    for (std::size_t i = 0; i < count; ++i) {
        logistic_row(param, stream, row.data());
        for (int j = 0; j < param.dimension; ++j) out(i, static_cast<std::size_t>(j)) = row[static_cast<std::size_t>(j)];
    }
    return out;
}

inline Matrix sample_logistic(const LogisticParam& param, std::size_t count,
                              const StreamSpec& spec) {
    RngStream stream(spec);
    return sample_logistic(param, count, stream);
}

// One row of the Cauchy distribution restricted to the positive orthant,
// by rejection: propose Gaussian directions G = L z until all components are
// positive, then divide by an independent |N(0,1)|. The orthant event
// depends only on G, so drawing the denominator after acceptance is exact
// and keeps the expected proposal count at 1/P(orthant) (2^-d for the
// identity scale matrix).
inline void orthant_cauchy_row(const ScaleMatrix& scale, RngStream& stream, double* row,
                               std::uint64_t* proposals = nullptr) {
    const int d = scale.dimension();
    if (d > 8) throw std::invalid_argument("orthant cauchy sampler supports dimension <= 8");
    const Matrix& l = scale.cholesky();
    for (;;) {
        if (proposals != nullptr) ++*proposals;
        double z[8];
        bool all_positive = true;
        for (int i = 0; i < d; ++i) {
            z[i] = stream.normal();
            double g = 0.0;
            for (int j = 0; j <= i; ++j) g += l(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * z[j];
            row[i] = g;
            if (g <= 0.0) {
                all_positive = false;
                break;
            }
        }
        if (all_positive) break;
    }
    double denom;
    do {
        denom = std::fabs(stream.normal());
    } while (denom == 0.0);
    for (int i = 0; i < d; ++i) row[i] /= denom;
}

inline Matrix sample_orthant_cauchy(const ScaleMatrix& scale, std::size_t count, RngStream& stream,
                                    std::uint64_t* proposals = nullptr) {
    if (scale.dimension() > 8)
        throw std::invalid_argument("orthant cauchy sampler supports dimension <= 8");
    Matrix out(count, static_cast<std::size_t>(scale.dimension()));
    std::vector<double> row(static_cast<std::size_t>(scale.dimension()));
    for (std::size_t i = 0; i < count; ++i) {
        orthant_cauchy_row(scale, stream, row.data(), proposals);
        for (int j = 0; j < scale.dimension(); ++j)
            out(i, static_cast<std::size_t>(j)) = row[static_cast<std::size_t>(j)];
    }
    return out;
}

inline Matrix sample_orthant_cauchy(const ScaleMatrix& scale, std::size_t count,
                                    const StreamSpec& spec, std::uint64_t* proposals = nullptr) {
    RngStream stream(spec);
    return sample_orthant_cauchy(scale, count, stream, proposals);
}

}  // namespace evt
