#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "evt/estimators.hpp"
#include "evt/rng.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("order statistics sort stably and leave input alone") {
    const std::vector<double> raw{3.0, 1.0, 2.0};
    const evt::SortedSample s = evt::order_statistics(raw);
    REQUIRE(s.values == std::vector<double>{1.0, 2.0, 3.0});
    REQUIRE(raw == std::vector<double>{3.0, 1.0, 2.0});

    REQUIRE(evt::order_statistics({5.0, 5.0, 5.0}).values == std::vector<double>{5.0, 5.0, 5.0});
    REQUIRE(evt::order_statistics({2.5}).values == std::vector<double>{2.5});
}

TEST_CASE("hill reproduces the hand-computed value") {
    // Top two of {1,2,4,8} against threshold 2: (log 8 + log 4)/2 - log 2.
    const evt::SortedSample s = evt::order_statistics({1.0, 2.0, 4.0, 8.0});
    REQUIRE_THAT(evt::hill(s, 2), WithinRel(1.5 * std::log(2.0), 1e-14));
}

TEST_CASE("hill is scale invariant and nonnegative") {
    evt::RngStream stream(evt::StreamSpec{21, 0});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(200);
        for (auto& v : raw) v = std::exp(2.0 * stream.normal());
        const evt::SortedSample s = evt::order_statistics(raw);
        for (auto& v : raw) v *= 1000.0;
        const evt::SortedSample scaled = evt::order_statistics(raw);
        const double g = evt::hill(s, 40);
        REQUIRE(g >= 0.0);
        REQUIRE_THAT(evt::hill(scaled, 40), WithinAbs(g, 1e-12));
    }
}

TEST_CASE("hill rejects bad tail counts and nonpositive thresholds") {
    const evt::SortedSample s = evt::order_statistics({1.0, 2.0, 3.0, 4.0});
    REQUIRE_THROWS_AS(evt::hill(s, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::hill(s, 4), std::invalid_argument);
    const evt::SortedSample with_zero = evt::order_statistics({0.0, 1.0, 2.0, 3.0});
    REQUIRE_THROWS_AS(evt::hill(with_zero, 3), std::domain_error);
    REQUIRE_NOTHROW(evt::hill(with_zero, 2));
}

TEST_CASE("weissman quantile hand value and exactness at p = k/n") {
    std::vector<double> raw(100);
    for (int i = 0; i < 100; ++i) raw[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
    const evt::SortedSample s = evt::order_statistics(raw);
    // anchor X_(n-k) = 90, k/(np) = 4, gamma = 1.
    REQUIRE(evt::weissman_quantile(s, 10, 0.025, 1.0) == 360.0);

    // p = k/n makes the extrapolation factor exactly 1 for any gamma.
    std::vector<double> other(512);
    for (int i = 0; i < 512; ++i) other[static_cast<std::size_t>(i)] = std::sqrt(i + 1.0);
    const evt::SortedSample s2 = evt::order_statistics(other);
    const double anchor = s2.values[512 - 128 - 1];
    REQUIRE(evt::weissman_quantile(s2, 128, 0.25, 0.73) == anchor);
}

TEST_CASE("weissman quantile is monotone in gamma beyond the anchor") {
    std::vector<double> raw(100);
    for (int i = 0; i < 100; ++i) raw[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
    const evt::SortedSample s = evt::order_statistics(raw);
    REQUIRE(evt::weissman_quantile(s, 10, 0.01, 1.2) > evt::weissman_quantile(s, 10, 0.01, 1.0));
    REQUIRE_THROWS_AS(evt::weissman_quantile(s, 10, 0.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::weissman_quantile(s, 10, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("average over k") {
    REQUIRE(evt::average_over_k(2, 4, [](long k) { return static_cast<double>(k); }) == 3.0);
    REQUIRE(evt::average_over_k(5, 5, [](long) { return 1.25; }) == 1.25);
    REQUIRE_THROWS_AS(evt::average_over_k(0, 3, [](long) { return 0.0; }), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::average_over_k(4, 3, [](long) { return 0.0; }), std::invalid_argument);
}

TEST_CASE("tuning validation and derived ratios") {
    REQUIRE_THROWS_AS(evt::TuningParams::checked(0, 10, 100, 50), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::TuningParams::checked(100, 120, 100, 50), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::TuningParams::checked(10, 10, 100, 50), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::TuningParams::checked(10, 150, 100, 50), std::invalid_argument);
    REQUIRE_THROWS_AS(evt::TuningParams::checked(10, 20, 100, -1), std::invalid_argument);

    const evt::TuningParams t = evt::TuningParams::checked(100, 150, 1000, 500);
    REQUIRE(t.nu2() == 100.0 / 150.0);
    REQUIRE(t.beta_hat() == 1.0);  // exact: integer products cancel
    REQUIRE(t.is_matched());

    const evt::TuningParams off = evt::TuningParams::checked(100, 160, 1000, 500);
    REQUIRE(!off.is_matched());
    REQUIRE_THAT(off.beta_hat(), WithinRel(16.0 / 15.0, 1e-15));
}

TEST_CASE("matched rule reproduces the reference settings and rounds ties up") {
    REQUIRE(evt::TuningParams::matched(100, 1000, 500).k_plus == 150);
    REQUIRE(evt::TuningParams::matched(100, 1000, 1000).k_plus == 200);
    REQUIRE(evt::TuningParams::matched(50, 500, 1000).k_plus == 150);
    // 1 * 1500/1000 = 1.5 rounds up to 2.
    REQUIRE(evt::TuningParams::matched(1, 1000, 500).k_plus == 2);
    // Matched tuning needs extra observations.
    REQUIRE_THROWS_AS(evt::TuningParams::matched(10, 100, 0), std::invalid_argument);
}
