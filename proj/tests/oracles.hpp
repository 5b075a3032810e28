// Independent oracles used by the tests. Everything here is deliberately
// written against different math than the library path it checks: closed
// forms, Gram-Schmidt, brute-force enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "rmt/matrix.hpp"

namespace oracles {

// Singular values of a 2x2 matrix from the characteristic polynomial of
// A^T A (quadratic formula).
inline std::pair<double, double> svd2x2(double a, double b, double c, double d) {
    const double t = a * a + b * b + c * c + d * d; // trace of A^T A
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    const double l1 = 0.5 * (t + disc);
    const double l2 = 0.5 * (t - disc);
    return {std::sqrt(std::max(0.0, l1)), std::sqrt(std::max(0.0, l2))};
}

// Distance from x to the span of the given rows via classical
// Gram-Schmidt with re-orthogonalization.
inline double gram_schmidt_residual(const std::vector<std::vector<double>>& rows,
                                    std::span<const double> x) {
    std::vector<std::vector<double>> basis;
    for (const auto& r : rows) {
        std::vector<double> v(r.begin(), r.end());
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                const double c = rmt::dot(v, b);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
            }
        }
        const double nv = rmt::norm2(v);
        if (nv > 1e-12) {
            for (auto& y : v) y /= nv;
            basis.push_back(std::move(v));
        }
    }
    std::vector<double> res(x.begin(), x.end());
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
            const double c = rmt::dot(res, b);
            for (std::size_t i = 0; i < res.size(); ++i) res[i] -= c * b[i];
        }
    }
    return rmt::norm2(res);
}

// Exact C(n, k) for small arguments.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    long double c = 1.0L;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return static_cast<double>(c);
}

// Brute-force small-ball supremum over +-1 signs at eps = 0: the largest
// total mass among coincident sums.
inline double bernoulli_atom_sup(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<double> sums;
    sums.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += (mask >> j & 1) ? v[j] : -v[j];
        sums.push_back(s);
    }
    std::sort(sums.begin(), sums.end());
    const double tol = 1e-9;
    std::size_t best = 0, run = 1;
    for (std::size_t i = 1; i < sums.size(); ++i) {
        if (sums[i] - sums[i - 1] <= tol) {
            ++run;
        } else {
            best = std::max(best, run);
            run = 1;
        }
    }
    best = std::max(best, run);
    return static_cast<double>(best) / std::pow(2.0, static_cast<double>(n));
}

// Brute-force best interval of width 2*eps for +-1 signs (real weights).
inline double bernoulli_interval_sup(std::span<const double> v, double eps) {
    const std::size_t n = v.size();
    std::vector<double> sums;
    sums.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += (mask >> j & 1) ? v[j] : -v[j];
        sums.push_back(s);
    }
    std::sort(sums.begin(), sums.end());
    std::size_t best = 0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        std::size_t count = 0;
        for (std::size_t j = i; j < sums.size() && sums[j] <= sums[i] + 2 * eps + 1e-12; ++j)
            ++count;
        best = std::max(best, count);
    }
    return static_cast<double>(best) / std::pow(2.0, static_cast<double>(n));
}

} // namespace oracles
