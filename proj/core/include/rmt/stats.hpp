#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rmt {

// Standard normal CDF.
double normal_cdf(double x);

// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
double reg_incomplete_beta(double a, double b, double x);

// Inverse of I_x(a, b) in x, by bisection.
double reg_incomplete_beta_inv(double a, double b, double p);

struct BinomialInterval {
    double low;
    double high;
};

// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
// proportion at the given confidence level.
BinomialInterval clopper_pearson(std::int64_t hits, std::int64_t trials,
                                 double confidence = 0.95);

// One-sided exact upper confidence bound for a binomial proportion.
double clopper_pearson_upper(std::int64_t hits, std::int64_t trials,
                             double confidence = 0.975);

// P(Binomial(n, 1/2) = n/2) = C(n, n/2) / 2^n, computed exactly for even
// n <= 62 (the binomial coefficient fits in 64 bits up to there).
double central_binomial_probability(int n);

// Median with the even-count average convention; input is copied.
double median(std::span<const double> values);

// Least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

} // namespace rmt
