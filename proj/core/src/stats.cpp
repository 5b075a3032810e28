#include "rmt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmt/errors.hpp"

namespace rmt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw NumericalError("incomplete beta continued fraction did not converge");
}

} // namespace

double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("reg_incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cont_frac(a, b, x) / a;
    }
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double reg_incomplete_beta_inv(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (reg_incomplete_beta(a, b, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

BinomialInterval clopper_pearson(std::int64_t hits, std::int64_t trials, double confidence) {
    if (trials <= 0 || hits < 0 || hits > trials)
        throw ValidationError("clopper_pearson: need 0 <= hits <= trials, trials > 0");
    const double alpha = 1.0 - confidence;
    BinomialInterval ci{};
    const auto h = static_cast<double>(hits);
    const auto n = static_cast<double>(trials);
    ci.low = (hits == 0) ? 0.0 : reg_incomplete_beta_inv(h, n - h + 1.0, alpha / 2.0);
    ci.high = (hits == trials) ? 1.0 : reg_incomplete_beta_inv(h + 1.0, n - h, 1.0 - alpha / 2.0);
    return ci;
}

double clopper_pearson_upper(std::int64_t hits, std::int64_t trials, double confidence) {
    if (trials <= 0 || hits < 0 || hits > trials)
        throw ValidationError("clopper_pearson_upper: need 0 <= hits <= trials, trials > 0");
    if (hits == trials) return 1.0;
    const auto h = static_cast<double>(hits);
    const auto n = static_cast<double>(trials);
    return reg_incomplete_beta_inv(h + 1.0, n - h, confidence);
}

double central_binomial_probability(int n) {
    if (n <= 0 || n % 2 != 0 || n > 62)
        throw ValidationError("central_binomial_probability: need even n in [2, 62]");
    // C(n, k) by the multiplicative formula; every intermediate divides exactly.
    unsigned long long c = 1;
    const int k = n / 2;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    }
    return static_cast<double>(c) * std::ldexp(1.0, -n);
}

double median(std::span<const double> values) {
    if (values.empty()) throw ValidationError("median of empty range");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    double hi = v[m];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + m);
    return 0.5 * (lo + hi);
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("ols_slope: need two same-length samples of size >= 2");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw NumericalError("ols_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

} // namespace rmt
