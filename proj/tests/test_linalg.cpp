#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rmt/constructions.hpp"
#include "rmt/errors.hpp"
#include "rmt/matrix.hpp"
#include "rmt/rng.hpp"
#include "rmt/spectral.hpp"
#include "rmt/svd.hpp"

using namespace rmt;

namespace {

DenseMatrix random_matrix(std::size_t n, std::uint64_t seed, bool bernoulli = false) {
    DenseMatrix m(n, n);
    CounterRng rng(seed, 0x7E57);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = bernoulli ? (rng.next_double() < 0.5 ? -1.0 : 1.0) : rng.next_gaussian();
    return m;
}

} // namespace

TEST_CASE("singular values of structured matrices") {
    const std::vector<double> id5 = singular_values(DenseMatrix::identity(5));
    for (double s : id5) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    DenseMatrix diag(2, 2);
    diag(0, 0) = 3.0;
    diag(1, 1) = 1.0;
    const std::vector<double> d = singular_values(diag);
    CHECK(d[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2x2 spectrum matches the quadratic-formula oracle") {
    // [[1,1],[0,1]]: eigenvalues of A^T A solve l^2 - 3l + 1 = 0
    DenseMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 1;
    a(1, 1) = 1;
    const auto [s1, s2] = oracles::svd2x2(1, 1, 0, 1);
    CHECK(s1 == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    const std::vector<double> sv = singular_values(a);
    CHECK(sv[0] == doctest::Approx(s1).epsilon(1e-10));
    CHECK(sv[1] == doctest::Approx(s2).epsilon(1e-10));
    CHECK(least_singular_value(a) == doctest::Approx(s2).epsilon(1e-10));
}

TEST_CASE("least singular value fast path: identity and singular input") {
    CHECK(least_singular_value(DenseMatrix::identity(7)) == doctest::Approx(1.0).epsilon(1e-12));
    DenseMatrix sing(2, 2, 1.0); // [[1,1],[1,1]]
    CHECK(least_singular_value(sing) <= 1e-12);
}

TEST_CASE("fast path agrees with the one-sided Jacobi oracle on random matrices") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 2 + seed % 29;
        const DenseMatrix m = random_matrix(n, seed, seed % 2 == 0);
        const double fast = least_singular_value(m);
        const std::vector<double> oracle = jacobi_singular_values(m);
        CHECK(fast == doctest::Approx(oracle.back()).epsilon(1e-8));
    }
}

TEST_CASE("golub-kahan and jacobi agree across the whole spectrum") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const std::size_t n = 3 + seed % 17;
        const DenseMatrix m = random_matrix(n, seed);
        const std::vector<double> gk = singular_values(m);
        const std::vector<double> j = jacobi_singular_values(m);
        REQUIRE(gk.size() == j.size());
        for (std::size_t i = 0; i < gk.size(); ++i)
            CHECK(gk[i] == doctest::Approx(j[i]).epsilon(1e-9));
    }
}

TEST_CASE("sum of squared singular values reconstructs the frobenius norm") {
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
        const DenseMatrix m = random_matrix(4 + seed % 13, seed);
        const std::vector<double> sv = singular_values(m);
        double sum2 = 0.0;
        for (double s : sv) sum2 += s * s;
        const double fro2 = m.frobenius_norm() * m.frobenius_norm();
        CHECK(sum2 == doctest::Approx(fro2).epsilon(1e-8));
    }
}

TEST_CASE("operator norm: identity, rank-one, and the shift pattern") {
    CHECK(operator_norm(DenseMatrix::identity(6)) == doctest::Approx(1.0).epsilon(1e-10));

    DenseMatrix ones(8, 8, 1.0);
    CHECK(operator_norm(ones) == doctest::Approx(8.0).epsilon(1e-9));

    // 3x3 shift pattern with L = 5: the nonzero rows have Gram matrix
    // L^2 (I + J), largest eigenvalue L^2 * n, so the norm is 5 sqrt(3).
    const DenseMatrix m = adversarial_pattern(3, 5.0);
    CHECK(operator_norm(m) == doctest::Approx(5.0 * std::sqrt(3.0)).epsilon(1e-9));
    CHECK(singular_values(m)[0] == doctest::Approx(5.0 * std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("operator norm duality and augmentation monotonicity") {
    for (std::uint64_t seed = 300; seed < 306; ++seed) {
        const DenseMatrix m = random_matrix(9, seed);
        CHECK(operator_norm(m) ==
              doctest::Approx(operator_norm(m.transposed())).epsilon(1e-8));

        // appending a row never decreases s1
        DenseMatrix taller(10, 9);
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) taller(i, j) = m(i, j);
        CounterRng rng(seed, 0xADD);
        for (std::size_t j = 0; j < 9; ++j) taller(9, j) = rng.next_gaussian();
        CHECK(operator_norm(taller) >= operator_norm(m) * (1.0 - 1e-9));
    }
}

TEST_CASE("unit normal to rows: coordinate planes and the diagonal") {
    const std::vector<double> v =
        unit_normal_to_rows({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v[2] == doctest::Approx(1.0).epsilon(1e-14)); // sign convention

    const std::vector<double> w = unit_normal_to_rows({{1.0, 1.0}});
    CHECK(w[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(unit_normal_to_rows({{1.0, 0.0, 0.0}}), ValidationError);
}

TEST_CASE("unit normal annihilates random row sets") {
    CounterRng rng(0x90, 0);
    std::vector<std::vector<double>> rows(9, std::vector<double>(10));
    for (auto& r : rows)
        for (auto& x : r) x = rng.next_gaussian();
    const std::vector<double> v = unit_normal_to_rows(rows);
    CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& r : rows) CHECK(std::abs(dot(r, v)) <= 1e-9);
}

TEST_CASE("distance to row span: identity, duplicate rows, oracle agreement") {
    const RowSpanDistance e1 = distance_to_row_span(DenseMatrix::identity(4), 0);
    CHECK(e1.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!e1.degenerate);

    DenseMatrix dup = random_matrix(5, 77);
    for (std::size_t j = 0; j < 5; ++j) dup(2, j) = dup(4, j);
    const RowSpanDistance zero = distance_to_row_span(dup, 2);
    CHECK(zero.value <= 1e-10);

    for (std::uint64_t seed = 400; seed < 408; ++seed) {
        const DenseMatrix m = random_matrix(8, seed, /*bernoulli=*/true);
        for (std::size_t k = 0; k < 8; ++k) {
            const RowSpanDistance d = distance_to_row_span(m, k);
            if (d.degenerate) continue; // rank-deficient Bernoulli draw
            std::vector<std::vector<double>> others;
            for (std::size_t i = 0; i < 8; ++i) {
                if (i == k) continue;
                others.emplace_back(m.row(i).begin(), m.row(i).end());
            }
            const double oracle = oracles::gram_schmidt_residual(others, m.row(k));
            CHECK(d.value == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectral summary flags rank deficiency as infinite kappa") {
    DenseMatrix sing(3, 3, 1.0);
    const SpectralSummary s = spectral_summary(sing);
    CHECK(s.kappa_infinite);
    CHECK(std::isinf(s.kappa));

    const SpectralSummary id = spectral_summary(DenseMatrix::identity(3));
    CHECK(!id.kappa_infinite);
    CHECK(id.kappa == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(id.log_kappa == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("non-finite entries are rejected") {
    DenseMatrix bad(2, 2, 1.0);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(singular_values(bad), ValidationError);
    CHECK_THROWS_AS(least_singular_value(bad), ValidationError);
    CHECK_THROWS_AS(operator_norm(bad), ValidationError);
}
