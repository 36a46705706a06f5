#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "distlearn/theory.hpp"

using namespace distlearn;

namespace {

// long-double evaluation of the closed form, used as the high-precision oracle
long double coefficient_oracle() {
    return 1.0L / (std::sqrt(std::numbers::pi_v<long double>) * std::exp(1.0L / 12.0L));
}

double relative_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

const std::vector<double> kOracleRates = {0.5, 1.0, 2.0, 2.5, std::numbers::e,
                                          5.0, 10.0, 50.0, 100.0, 500.0};

} // namespace

TEST_CASE("folded-mean coefficient") {
    const double coef = folded_mean_lower_coefficient();
    CHECK(std::abs(coef - static_cast<double>(coefficient_oracle())) <= 1e-15);
    CHECK(coef == doctest::Approx(0.5190794753).epsilon(1e-9));
    CHECK(coef < 1.0);
    CHECK(coef > 0.5);
    CHECK(coef * coef / 16.0 == doctest::Approx(0.0168401).epsilon(1e-4)); // ~0.017
}

TEST_CASE("poisson pmf") {
    CHECK(poisson_pmf(2.0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    // recurrence pmf(y)/pmf(y-1) = rate/y, in log space so the deep tail
    // (where the pmf itself underflows) is still exercised
    for (double rate : {0.3, 2.0, 17.5, 300.0}) {
        for (std::uint64_t y : {1, 2, 5, 30, 400}) {
            const double log_ratio = poisson_log_pmf(rate, y) - poisson_log_pmf(rate, y - 1);
            const double expected = std::log(rate / static_cast<double>(y));
            CHECK(log_ratio == doctest::Approx(expected).epsilon(1e-9));
        }
    }

    const long double direct = std::exp(-5.0L) * 3125.0L / 120.0L;
    CHECK(poisson_pmf(5.0, 5) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
    CHECK(poisson_pmf(5.0, 5) == doctest::Approx(0.175467).epsilon(1e-5));

    for (double rate : kOracleRates) {
        CHECK(std::abs(poisson_pmf_truncated_total(rate) - 1.0) < 1e-12);
    }
}

TEST_CASE("folded absolute mean: closed form vs truncated sum") {
    CHECK(folded_abs_mean_exact(1.0) == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-12));
    CHECK(folded_abs_mean_exact(2.0) ==
          doctest::Approx(8.0 * std::exp(-2.0)).epsilon(1e-12));

    for (double rate : kOracleRates) {
        CHECK(relative_diff(folded_abs_mean_exact(rate), folded_abs_mean_by_summation(rate)) <=
              1e-9);
    }

    const double coef = folded_mean_lower_coefficient();
    CHECK(folded_abs_mean_by_summation(50.0) >= coef * std::sqrt(50.0)); // ~3.6705
}

TEST_CASE("folded moment bounds") {
    CHECK_THROWS_AS(folded_moment_bounds(1.9), HypothesisError);

    const auto at_two = folded_moment_bounds(2.0);
    CHECK(at_two.mean_lower == doctest::Approx(0.7340894).epsilon(1e-6));
    CHECK(at_two.var_upper == 2.0);

    const auto at_four = folded_moment_bounds(4.0);
    CHECK(at_four.mean_lower == doctest::Approx(1.0381590).epsilon(1e-6));
    CHECK(folded_abs_mean_exact(4.0) > at_four.mean_lower);

    // folded variance at rate 2: second moment is the plain variance
    const double folded_mean = folded_abs_mean_exact(2.0);
    const double folded_var = 2.0 - folded_mean * folded_mean;
    CHECK(folded_var == doctest::Approx(0.8278).epsilon(1e-3));
    CHECK(folded_var <= 2.0);

    // 30-point log grid: mean bound holds, variance bound holds, and the
    // summation-oracle folded variance agrees with the closed-form one
    for (int i = 0; i < 30; ++i) {
        const double rate =
            (i == 0) ? 2.0
                     : std::exp(std::log(2.0) + (std::log(1e4) - std::log(2.0)) * i / 29.0);
        const auto bounds = folded_moment_bounds(rate);
        const double mean_closed = folded_abs_mean_exact(rate);
        const double mean_sum = folded_abs_mean_by_summation(rate);
        CHECK(mean_closed >= bounds.mean_lower);
        CHECK(relative_diff(mean_closed, mean_sum) <= 1e-9);

        const double second_sum = folded_second_moment_by_summation(rate);
        CHECK(relative_diff(second_sum, rate) <= 1e-9); // E(Y-rate)^2 = Var(Y)
        const double var_closed = rate - mean_closed * mean_closed;
        const double var_sum = second_sum - mean_sum * mean_sum;
        CHECK(var_closed <= bounds.var_upper + 1e-12);
        CHECK(relative_diff(var_closed, var_sum) <= 1e-9);
    }
}

TEST_CASE("stirling chain margins") {
    CHECK_THROWS_AS(stirling_chain_check(1.5), HypothesisError);

    for (double rate : {2.0, 2.999, 3.001, 3.0, 7.3, 100.0, 9999.5}) {
        const auto chain = stirling_chain_check(rate);
        CHECK(chain.log_margin_floor >= 0.0);
        CHECK(chain.log_margin_stirling >= 0.0);
        CHECK(chain.log_margin_final >= 0.0);
        // displayed levels follow the margins up to their own rounding
        CHECK(chain.exact >= chain.floor_step * (1.0 - 1e-9));
        CHECK(chain.floor_step >= chain.stirling_step * (1.0 - 1e-9));
        CHECK(chain.stirling_step >= chain.final_step * (1.0 - 1e-9));
        CHECK(chain.final_step ==
              doctest::Approx(folded_mean_lower_coefficient() * std::sqrt(rate)));
    }

    // at integral rates the floor step IS the exact value
    CHECK(stirling_chain_check(3.0).log_margin_floor == 0.0);
    // for rate >= 2 the floor dominates half the rate
    CHECK(std::sqrt(std::floor(100.0)) / std::sqrt(100.0 / 2.0) >= 1.0);

    // the factorial-step margin tracks its leading 1/(360 n^3) behaviour on
    // both sides of the evaluation switch at n = 50
    for (double rate : {49.2, 50.7, 51.3, 1457.3, 9999.5}) {
        const auto chain = stirling_chain_check(rate);
        const double fl = std::floor(rate);
        const double leading = 1.0 / (360.0 * fl * fl * fl);
        CHECK(chain.log_margin_stirling == doctest::Approx(leading).epsilon(0.05));
    }
}

TEST_CASE("chebyshev failure bound") {
    const BoundParams flagship{1024, 1638.0, 0.1, 0.1};
    const double bound = chebyshev_failure_bound(flagship);

    // long-double re-evaluation of the same closed form
    const long double coef = coefficient_oracle();
    const long double gap = coef * std::sqrt(1638.0L * 1024.0L) - 2.0L * 1638.0L * 0.1L;
    CHECK(bound == doctest::Approx(static_cast<double>(1638.0L / (gap * gap))).epsilon(1e-12));
    CHECK(bound == doctest::Approx(0.013789).epsilon(1e-4));
    CHECK(4.0 * bound == doctest::Approx(0.0552).epsilon(1e-2));

    // vacuous regime: 2 m eps >= coef sqrt(mN)
    const BoundParams vacuous{1024, 100000.0, 0.1, 0.1};
    CHECK_THROWS_AS(chebyshev_failure_bound(vacuous), BoundInapplicableError);

    // algebraic identity at m = c N / eps^2
    const double coef_d = folded_mean_lower_coefficient();
    for (double c : {0.001, 0.008, 0.016}) {
        for (std::uint64_t n_points :
             {std::uint64_t{64}, std::uint64_t{1024}, std::uint64_t{1} << 20}) {
            const double eps = 0.1;
            const double m = c * static_cast<double>(n_points) / (eps * eps);
            const double lhs = chebyshev_failure_bound({n_points, m, eps, 0.1});
            const double root = coef_d * std::sqrt(c) - 2.0 * c;
            const double rhs = c / (root * root * static_cast<double>(n_points));
            CHECK(relative_diff(lhs, rhs) <= 1e-9);
        }
    }

    // final-display comparison at c = 0.016 < coef^2/16
    const double c = 0.016;
    const double root = coef_d * std::sqrt(c) - 2.0 * c;
    CHECK(c / (root * root * 1024.0) <= 4.0 / (coef_d * coef_d * 1024.0));
    CHECK(4.0 / (coef_d * coef_d * 1024.0) == doctest::Approx(0.01450).epsilon(1e-3));
}

TEST_CASE("erm lower threshold") {
    CHECK(erm_lower_threshold(1024, 0.1, 0.016) == 1638);
    CHECK(erm_lower_threshold(1024, 0.5, 0.016) == 65);
    CHECK_THROWS_AS(erm_lower_threshold(1024, 0.1, 0.017), std::invalid_argument);
    CHECK_THROWS_AS(erm_lower_threshold(1024, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(erm_lower_threshold(1024, 0.1, -0.1), std::invalid_argument);
}

TEST_CASE("perm sample bound") {
    CHECK(perm_sample_bound(5, 4, 0.1, 0.1) == 4606);
    // log(1/delta) -> 0 as delta -> 1: the pre-ceiling value vanishes
    CHECK(perm_sample_bound(5, 4, 0.1, 1.0 - 1e-12) <= 1);
    const std::uint64_t base = perm_sample_bound(5, 4, 0.1, 0.1);
    const std::uint64_t doubled = perm_sample_bound(10, 4, 0.1, 0.1);
    CHECK(doubled >= 2 * base - 1);
    CHECK(doubled <= 2 * base);
    CHECK_THROWS_AS(perm_sample_bound(5, 4, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("distinct-samples TV") {
    CHECK(distinct_samples_tv(1024, 1024) == 0.0);
    CHECK(distinct_samples_tv(256, 1024) == doctest::Approx(0.75));
    CHECK(distinct_samples_tv(1, 1024) == doctest::Approx(1023.0 / 1024.0));
    CHECK_THROWS_AS(distinct_samples_tv(1025, 1024), std::invalid_argument);
    CHECK_THROWS_AS(distinct_samples_tv(0, 1024), std::invalid_argument);

    for (std::uint64_t n_points : {std::uint64_t{7}, std::uint64_t{64}, std::uint64_t{1024}}) {
        for (std::uint64_t m = 1; m <= n_points; m += std::max<std::uint64_t>(1, n_points / 13)) {
            const double tv = distinct_samples_tv(m, n_points);
            const double half_bound =
                0.5 * (1.0 - static_cast<double>(m) / static_cast<double>(n_points));
            CHECK(tv >= half_bound);
        }
    }
}
