#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmt/constructions.hpp"
#include "rmt/errors.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stats.hpp"

using namespace rmt;

TEST_CASE("adversarial matrix matches the displayed pattern at n=4, L=5") {
    const DenseMatrix m = adversarial_matrix(4, 5.0);
    const std::vector<std::vector<double>> expected = {
        {0, 0, 0, 0}, {5, 0, 0, 5}, {0, 5, 0, 5}, {0, 0, 5, 5}};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(m(i, j) == expected[i][j]);

    std::size_t nonzero = 0;
    for (double v : m.data())
        if (v != 0.0) {
            CHECK(v == 5.0);
            ++nonzero;
        }
    CHECK(nonzero == 2 * (4 - 1));
}

TEST_CASE("adversarial matrix validates its preconditions") {
    CHECK_THROWS_AS(adversarial_matrix(3, 5.0), ValidationError);  // odd
    CHECK_THROWS_AS(adversarial_matrix(2, 5.0), ValidationError);  // too small
    CHECK_THROWS_AS(adversarial_matrix(6, 5.0), ValidationError);  // L < n
}

TEST_CASE("the noiseless shift is exactly singular (zero first row)") {
    CHECK(least_singular_value(adversarial_matrix(8, 16.0)) <= 1e-14);
}

TEST_CASE("sample_shifted: supports, offsets, determinism") {
    const ShiftedEnsemble plain = ShiftedEnsemble::centered(6, EntryDistribution::bernoulli());
    const DenseMatrix p = sample_shifted(plain, 3);
    for (double v : p.data()) CHECK((v == 1.0 || v == -1.0));

    const ShiftedEnsemble shifted(adversarial_matrix(4, 5.0), EntryDistribution::bernoulli());
    const DenseMatrix s = sample_shifted(shifted, 3);
    for (std::size_t j = 0; j < 4; ++j) CHECK((s(0, j) == 1.0 || s(0, j) == -1.0));
    CHECK((s(1, 0) == 4.0 || s(1, 0) == 6.0));

    const DenseMatrix s2 = sample_shifted(shifted, 3);
    CHECK(s.data() == s2.data());
}

TEST_CASE("noise is paired across shifts for a fixed seed") {
    const EntryDistribution law = EntryDistribution::bernoulli();
    const ShiftedEnsemble a(adversarial_matrix(6, 10.0), law);
    const ShiftedEnsemble b(adversarial_matrix(6, 100.0), law);
    const DenseMatrix ma = sample_shifted(a, 17);
    const DenseMatrix mb = sample_shifted(b, 17);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            CHECK(ma(i, j) - a.shift(i, j) == mb(i, j) - b.shift(i, j));
}

TEST_CASE("normal profile of the noiseless shift is the exact flat vector") {
    const std::size_t n = 10;
    const DenseMatrix m = adversarial_matrix(n, 20.0);
    const NormalProfile profile = normal_vector_profile(m);
    const double flat = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i + 1 < n; ++i)
        CHECK(profile.v[i] == doctest::Approx(flat).epsilon(1e-12));
    CHECK(profile.v[n - 1] == doctest::Approx(-flat).epsilon(1e-12));
    CHECK(profile.max_abs_deviation <= 1e-12);
    // oracle: direct dot products with the generating rows
    for (std::size_t i = 1; i < n; ++i) CHECK(std::abs(dot(m.row(i), profile.v)) <= 1e-10);
}

TEST_CASE("normal profile is a unit vector on noisy samples") {
    const ShiftedEnsemble e(DenseMatrix::identity(12), EntryDistribution::bernoulli());
    const NormalProfile profile = normal_vector_profile(sample_shifted(e, 5));
    CHECK(norm2(profile.v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(profile.v[11] <= 0.0);
}

TEST_CASE("profile deviations scale like 1/L with a stable constant") {
    const std::size_t n = 50;
    const int seeds = 100;
    std::vector<double> c_values;
    for (double big_l : {2500.0, 25000.0}) {
        const ShiftedEnsemble e(adversarial_matrix(n, big_l), EntryDistribution::bernoulli());
        double worst = 0.0;
        for (int s = 0; s < seeds; ++s) {
            const NormalProfile profile = normal_vector_profile(sample_shifted(e, 1000 + s));
            REQUIRE(!profile.degenerate);
            worst = std::max(worst, profile.max_abs_deviation * big_l);
        }
        c_values.push_back(worst);
    }
    CHECK(c_values[0] <= 50.0);
    CHECK(c_values[1] <= 50.0);
    // stability across a decade of L
    CHECK(c_values[1] / c_values[0] >= 0.25);
    CHECK(c_values[1] / c_values[0] <= 4.0);
}

TEST_CASE("the zero-sum sign event has the central-binomial frequency") {
    const std::size_t n = 16;
    const ShiftedEnsemble e(adversarial_matrix(n, 16.0), EntryDistribution::bernoulli());
    const int trials = 4000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        const DenseMatrix m = sample_shifted(e, 50'000 + t);
        double sum = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) sum += m(0, j);
        sum -= m(0, n - 1);
        if (std::abs(sum) < 0.5) ++hits;
    }
    const double expected = central_binomial_probability(static_cast<int>(n));
    const double freq = static_cast<double>(hits) / trials;
    const double se = std::sqrt(expected * (1.0 - expected) / trials);
    CHECK(std::abs(freq - expected) <= 3.0 * se);
}

TEST_CASE("on the event, || M_n v || scales like n / L") {
    const std::size_t n = 16;
    const int seeds = 400;
    std::vector<double> medians;
    for (double big_l : {160.0, 1600.0}) {
        const ShiftedEnsemble e(adversarial_matrix(n, big_l), EntryDistribution::bernoulli());
        std::vector<double> products;
        for (int s = 0; s < seeds; ++s) {
            const DenseMatrix m = sample_shifted(e, 90'000 + s);
            double sum = 0.0;
            for (std::size_t j = 0; j + 1 < n; ++j) sum += m(0, j);
            sum -= m(0, n - 1);
            if (std::abs(sum) >= 0.5) continue;
            const NormalProfile profile = normal_vector_profile(m);
            products.push_back(norm2(m.apply(profile.v)));
        }
        REQUIRE(products.size() >= 20);
        medians.push_back(median(products) * big_l / static_cast<double>(n));
    }
    // the normalized constant is stable across a decade of L
    CHECK(medians[1] / medians[0] >= 0.25);
    CHECK(medians[1] / medians[0] <= 4.0);
}
