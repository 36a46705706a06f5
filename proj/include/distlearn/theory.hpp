#pragma once

#include <cstdint>

#include "distlearn/errors.hpp"

namespace distlearn {

// Parameters of the closed-form failure bounds. The sample count is carried
// as a real so algebraic identities like m = cN/eps^2 can be evaluated
// exactly; experiment-side counts stay integral.
struct BoundParams {
    std::uint64_t support_size = 1; // N
    double samples = 0.0;           // m
    double epsilon = 0.1;
    double delta = 0.1;

    double lambda() const { return samples / static_cast<double>(support_size); }
    void validate() const; // throws std::invalid_argument
};

// 1/(sqrt(pi) * e^{1/12}) = 0.51907947...: the coefficient of the sqrt(rate)
// lower bound on the folded absolute Poisson moment below.
double folded_mean_lower_coefficient();

// Poisson(lambda) pmf at y, evaluated in log space so rates up to ~1e4
// survive (naive factorials overflow past y ~ 170).
double poisson_log_pmf(double lambda, std::uint64_t y);
double poisson_pmf(double lambda, std::uint64_t y);

// Truncation point lambda + 40*sqrt(lambda) + 40; the pmf mass beyond it is
// far below 1e-12.
std::uint64_t poisson_truncation_point(double lambda);

// E|Y - lambda| for Y ~ Poisson(lambda), closed form
// 2*lambda^{floor(lambda)+1} e^{-lambda} / floor(lambda)! in log space.
double folded_abs_mean_exact(double lambda);

// Independent truncated-sum oracles for the folded moments; kept alongside
// the closed forms so agreement can be checked at any rate.
double folded_abs_mean_by_summation(double lambda);
double folded_second_moment_by_summation(double lambda);
double poisson_pmf_truncated_total(double lambda);

// Lower bound on the folded mean and upper bound on the folded variance:
// (coef * sqrt(lambda), lambda). Needs lambda >= 2; throws HypothesisError
// below that.
struct FoldedMomentBounds {
    double mean_lower = 0.0;
    double var_upper = 0.0;
};
FoldedMomentBounds folded_moment_bounds(double lambda);

// The inequality chain that lower-bounds the folded mean, evaluated
// numerically at one rate:
//   exact  >=  floor step   (2*fl^{fl+1} e^{-fl} / fl!,  fl = floor(lambda);
//                            2 x^{fl+1} e^{-x} increases in x up to fl+1)
//          >=  stirling step (sqrt(2/pi) * sqrt(fl) / e^{1/(12 fl)},
//                            factorial replaced by its Stirling upper bound)
//          >=  final step    (coef * sqrt(lambda), using fl >= lambda/2)
// Margins are the log-space differences, evaluated in cancellation-free
// form (log1p for the floor step, an accurate Stirling remainder for the
// factorial step) so their sign survives even where the margin is ~1e-15;
// at integral rates the floor margin is exactly zero.
struct StirlingChainReport {
    double lambda = 0.0;
    double exact = 0.0;
    double floor_step = 0.0;
    double stirling_step = 0.0;
    double final_step = 0.0;
    double log_margin_floor = 0.0;    // log(exact) - log(floor_step)
    double log_margin_stirling = 0.0; // log(floor_step) - log(stirling_step)
    double log_margin_final = 0.0;    // log(stirling_step) - log(final_step)
};
StirlingChainReport stirling_chain_check(double lambda); // lambda >= 2

// Chebyshev failure bound m / (coef*sqrt(mN) - 2*m*eps)^2. Applicable only
// while 2*m*eps < coef*sqrt(mN), i.e. m < coef^2 N / (4 eps^2); throws
// BoundInapplicableError otherwise. Multiplied by 4 it bounds the
// probability that the empirical distribution of m uniform draws on N
// points lands within eps in TV.
double chebyshev_failure_bound(const BoundParams& p);

// floor(c * N / eps^2): the largest sample count certified to fail, for
// c below coef^2/16 (~0.0168).
std::uint64_t erm_lower_threshold(std::uint64_t support_size, double epsilon, double c);

// ceil(C * n * k * log(1/delta) / eps^2): the polynomial sample bound for
// the product empirical estimator; the constant C is a caller knob since
// only the growth rate is pinned down.
std::uint64_t perm_sample_bound(std::uint32_t n, std::uint32_t k, double epsilon,
                                double delta, double big_constant = 1.0);

// Exact TV between the empirical distribution of m distinct samples and the
// uniform distribution on N points: 1 - m/N. Needs 1 <= m <= N.
double distinct_samples_tv(std::uint64_t m, std::uint64_t support_size);

} // namespace distlearn
