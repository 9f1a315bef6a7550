#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "evt/sampling.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Kolmogorov-Smirnov distance of a sample against a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

}  // namespace

TEST_CASE("pareto transform hits hand values") {
    REQUIRE(evt::pareto_from_uniform(1.0, 0.5) == 2.0);
    REQUIRE(evt::pareto_from_uniform(2.0, 0.25) == 16.0);
}

TEST_CASE("pareto sampler is deterministic and supported on [1,inf)") {
    const auto a = evt::sample_pareto(0.7, 5000, evt::StreamSpec{11, 2});
    const auto b = evt::sample_pareto(0.7, 5000, evt::StreamSpec{11, 2});
    REQUIRE(a == b);
    for (double x : a) REQUIRE(x >= 1.0);
    REQUIRE_THROWS_AS(evt::sample_pareto(0.0, 10, evt::StreamSpec{1, 0}), std::invalid_argument);
}

TEST_CASE("scale matrix validation") {
    REQUIRE_NOTHROW(evt::ScaleMatrix::bivariate(0.8));
    REQUIRE_NOTHROW(evt::ScaleMatrix::trivariate(0.5, 0.3));
    REQUIRE_NOTHROW(evt::ScaleMatrix::equicorrelated(4, 0.2));

    // Not positive definite.
    REQUIRE_THROWS_AS(evt::ScaleMatrix::bivariate(1.2), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::ScaleMatrix::equicorrelated(3, -0.6), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::ScaleMatrix::trivariate(0.9, -0.9), std::invalid_argument);

    evt::Matrix off_diag = evt::Matrix::identity(2);
    off_diag(0, 0) = 2.0;
    REQUIRE_THROWS_AS(evt::ScaleMatrix(off_diag), std::invalid_argument);

    evt::Matrix asym = evt::Matrix::identity(2);
    asym(0, 1) = 0.3;
    asym(1, 0) = 0.1;
    REQUIRE_THROWS_AS(evt::ScaleMatrix(asym), std::invalid_argument);
}

TEST_CASE("logistic parameter validation") {
    REQUIRE_NOTHROW(evt::LogisticParam(2, 1.0));
    REQUIRE_NOTHROW(evt::LogisticParam(3, 0.1));
    REQUIRE_THROWS_AS(evt::LogisticParam(1, 0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::LogisticParam(2, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::LogisticParam(2, 1.5), std::invalid_argument);
}

TEST_CASE("positive stable draws match their Laplace transform") {
    // E exp(-t S) = exp(-t^theta); Monte Carlo check at a few t.
    for (double theta : {0.3, 0.7}) {
        const auto s = evt::sample_positive_stable(theta, 200000, evt::StreamSpec{5, 1});
        for (double t : {0.5, 1.0, 2.0}) {
            double sum = 0.0;
            for (double v : s) sum += std::exp(-t * v);
            REQUIRE_THAT(sum / static_cast<double>(s.size()),
                         WithinAbs(std::exp(-std::pow(t, theta)), 0.01));
        }
    }
}

TEST_CASE("positive stable degenerates to 1 at theta = 1") {
    const auto s = evt::sample_positive_stable(1.0, 100, evt::StreamSpec{5, 2});
    for (double v : s) REQUIRE(v == 1.0);
}

TEST_CASE("logistic sampler has standard Frechet margins") {
    const evt::LogisticParam param(2, 0.4);
    const evt::Matrix data = evt::sample_logistic(param, 50000, evt::StreamSpec{9, 0});
    for (int col : {0, 1}) {
        std::vector<double> xs(data.rows());
        for (std::size_t i = 0; i < data.rows(); ++i)
            xs[i] = data(i, static_cast<std::size_t>(col));
        const double d = ks_distance(std::move(xs), [](double x) { return std::exp(-1.0 / x); });
        REQUIRE(d < 1.63 / std::sqrt(50000.0));  // 1% critical value
    }
}

TEST_CASE("logistic sampler at theta = 1 gives independent Frechet coordinates") {
    const evt::LogisticParam param(2, 1.0);
    const evt::Matrix data = evt::sample_logistic(param, 100000, evt::StreamSpec{9, 7});
    long below = 0;
    long both = 0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        if (data(i, 0) <= 1.0) ++below;
        if (data(i, 0) <= 1.0 && data(i, 1) <= 1.0) ++both;
    }
    const double p = std::exp(-1.0);
    REQUIRE_THAT(static_cast<double>(below) / 100000.0, WithinAbs(p, 0.01));
    REQUIRE_THAT(static_cast<double>(both) / 100000.0, WithinAbs(p * p, 0.01));
}

TEST_CASE("logistic sampler is deterministic") {
    const evt::LogisticParam param(3, 0.3);
    const evt::Matrix a = evt::sample_logistic(param, 1000, evt::StreamSpec{3, 3});
    const evt::Matrix b = evt::sample_logistic(param, 1000, evt::StreamSpec{3, 3});
    REQUIRE(a.data() == b.data());
}

TEST_CASE("orthant cauchy rows are positive, deterministic, and cost ~2^d proposals") {
    const evt::ScaleMatrix scale = evt::ScaleMatrix::bivariate(0.0);
    std::uint64_t proposals = 0;
    const evt::Matrix a = evt::sample_orthant_cauchy(scale, 20000, evt::StreamSpec{77, 0}, &proposals);
    const evt::Matrix b = evt::sample_orthant_cauchy(scale, 20000, evt::StreamSpec{77, 0});
    REQUIRE(a.data() == b.data());
    for (double v : a.data()) REQUIRE(v > 0.0);
    // Expected proposals per accepted row is 4 for the identity scale.
    REQUIRE_THAT(static_cast<double>(proposals) / 20000.0, WithinAbs(4.0, 0.2));
}

TEST_CASE("orthant cauchy margin for the independent scale is half-Cauchy") {
    // With s = 0 and d = 2 the orthant-conditioned margin integrates to
    // exactly the half-Cauchy density 2/(pi (1+x^2)).
    const evt::ScaleMatrix scale = evt::ScaleMatrix::bivariate(0.0);
    const evt::Matrix data = evt::sample_orthant_cauchy(scale, 20000, evt::StreamSpec{78, 0});
    std::vector<double> xs(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) xs[i] = data(i, 0);
    const double pi = 3.14159265358979323846;
    const double d = ks_distance(std::move(xs), [pi](double x) { return 2.0 / pi * std::atan(x); });
    REQUIRE(d < 1.63 / std::sqrt(20000.0));
}

TEST_CASE("orthant cauchy trivariate draws stay positive with mixed dependence") {
    const evt::ScaleMatrix scale = evt::ScaleMatrix::trivariate(0.8, 0.3);
    std::uint64_t proposals = 0;
    const evt::Matrix data = evt::sample_orthant_cauchy(scale, 5000, evt::StreamSpec{79, 0}, &proposals);
    for (double v : data.data()) REQUIRE(v > 0.0);
    // Positive association raises the orthant probability above 2^-3.
    REQUIRE(static_cast<double>(proposals) / 5000.0 < 8.0);
}
