#include "rmt/spectral.hpp"

#include <cmath>
#include <limits>

#include "rmt/errors.hpp"
#include "rmt/rng.hpp"
#include "rmt/svd.hpp"

namespace rmt {

namespace {

double norm1(const DenseMatrix& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double norm_inf(const DenseMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (double v : a.row(i)) s += std::abs(v);
        best = std::max(best, s);
    }
    return best;
}

std::vector<double> unit_pseudorandom(std::size_t n, std::uint64_t stream) {
    CounterRng rng(0x5157ULL, stream);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_gaussian();
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
    return v;
}

void normalize(std::vector<double>& v) {
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
}

} // namespace

std::vector<double> singular_values(const DenseMatrix& a) {
    if (!a.all_finite()) throw ValidationError("singular_values: non-finite entries");
    SvdResult svd = golub_kahan_svd(a, /*want_vectors=*/true);
    // Residual check of every (sigma, u, v) triple against the input.
    const double s1 = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
    const double budget = 1e-10 * std::max(1.0, s1);
    const std::size_t k = svd.singular_values.size();
    std::vector<double> vi(a.cols()), avi;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < a.cols(); ++i) vi[i] = svd.v(i, j);
        avi = a.apply(vi);
        double r = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const double d = avi[i] - svd.singular_values[j] * svd.u(i, j);
            r += d * d;
        }
        if (std::sqrt(r) > budget)
            throw NumericalError("singular_values: decomposition residual check failed");
    }
    return svd.singular_values;
}

double least_singular_value(const DenseMatrix& a, double tol) {
    if (a.rows() != a.cols()) throw ValidationError("least_singular_value: matrix must be square");
    if (!a.all_finite()) throw ValidationError("least_singular_value: non-finite entries");
    if (tol < 0.0) throw ValidationError("least_singular_value: tol must be >= 0");
    const std::size_t n = a.rows();
    const double fro = a.frobenius_norm();
    if (fro == 0.0) return 0.0;

    const HouseholderQr qr(a);
    // A rank-deficient triangular factor means sn = 0 outright; a nearly
    // zero pivot sends us to the full decomposition.
    if (qr.min_abs_r_diag() == 0.0) return 0.0;
    bool fast_ok = qr.min_abs_r_diag() > 1e-14 * qr.max_abs_r_diag();

    double sigma = std::numeric_limits<double>::quiet_NaN();
    if (fast_ok) {
        // Inverse iteration with (A^T A)^{-1} = R^{-1} R^{-T}.
        std::vector<double> x = unit_pseudorandom(n, 0x1A57ULL);
        double prev = std::numeric_limits<double>::infinity();
        const double stall = std::max(0.25 * tol, 1e-15);
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            std::vector<double> z = qr.solve_r(qr.solve_rt(x));
            normalize(z);
            x = std::move(z);
            sigma = norm2(qr.apply_r(x));
            if (std::abs(sigma - prev) <= stall * sigma) {
                converged = true;
                break;
            }
            prev = sigma;
        }
        if (converged) {
            // certificate: || A^T A v - sigma^2 v || small on the Frobenius scale
            std::vector<double> w = qr.apply_rt(qr.apply_r(x));
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = w[i] - sigma * sigma * x[i];
                r += d * d;
            }
            if (std::sqrt(r) <= 1e-11 * fro * fro) return sigma;
        }
    }

    // Fallback: full decomposition. Non-convergence there is a hard error.
    try {
        SvdResult svd = golub_kahan_svd(a, /*want_vectors=*/false);
        return svd.singular_values.back();
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("least_singular_value: fallback failed: ") + e.what());
    }
}

double operator_norm(const DenseMatrix& a, double tol) {
    if (!a.all_finite()) throw ValidationError("operator_norm: non-finite entries");
    if (!(tol > 0.0)) throw ValidationError("operator_norm: tol must be positive");
    const double upper = std::min(a.frobenius_norm(), std::sqrt(norm1(a) * norm_inf(a)));
    if (upper == 0.0) return 0.0;

    double best = 0.0;
    for (std::uint64_t stream : {0x0BE5ULL, 0x0BE6ULL}) {
        std::vector<double> b = unit_pseudorandom(a.cols(), stream);
        double prev = 0.0;
        for (int it = 0; it < 20000; ++it) {
            std::vector<double> ab = a.apply(b);
            const double sigma = norm2(ab); // Rayleigh lower bound for unit b
            b = a.apply_transpose(ab);
            const double nb = norm2(b);
            if (nb == 0.0) {
                best = std::max(best, sigma);
                break;
            }
            for (auto& x : b) x /= nb;
            if (std::abs(sigma - prev) <= 0.125 * tol * sigma) {
                best = std::max(best, sigma);
                break;
            }
            prev = sigma;
            if (it == 19999) best = std::max(best, sigma);
        }
    }
    return std::min(best, upper);
}

std::vector<double> unit_normal_to_rows(const DenseMatrix& rows) {
    const std::size_t n = rows.cols();
    if (rows.rows() + 1 != n)
        throw ValidationError("unit_normal_to_rows: need n-1 rows of length n");
    if (!rows.all_finite()) throw ValidationError("unit_normal_to_rows: non-finite entries");

    // Null vector = last column of the full Q factor of rows^T.
    const HouseholderQr qr(rows.transposed());
    std::vector<double> en(n, 0.0);
    en[n - 1] = 1.0;
    std::vector<double> v = qr.apply_q(en);
    normalize(v);

    double amax = 0.0;
    for (double x : v) amax = std::max(amax, std::abs(x));
    for (double x : v) {
        if (std::abs(x) > 1e-12 * amax) {
            if (x < 0.0)
                for (auto& y : v) y = -y;
            break;
        }
    }
    return v;
}

std::vector<double> unit_normal_to_rows(const std::vector<std::vector<double>>& rows) {
    return unit_normal_to_rows(DenseMatrix::from_rows(rows));
}

RowSpanDistance distance_to_row_span(const DenseMatrix& a, std::size_t k) {
    if (a.rows() != a.cols()) throw ValidationError("distance_to_row_span: square matrices only");
    const std::size_t n = a.rows();
    if (k >= n) throw ValidationError("distance_to_row_span: row index out of range");

    DenseMatrix others(n - 1, n);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k) continue;
        for (std::size_t j = 0; j < n; ++j) others(r, j) = a(i, j);
        ++r;
    }

    const HouseholderQr qr(others.transposed());
    std::size_t rank = 0;
    const double pivot_floor = 1e-12 * std::max(1.0, qr.max_abs_r_diag());
    for (double d : qr.r_diag())
        if (std::abs(d) > pivot_floor) ++rank;

    std::vector<double> xk(a.row(k).begin(), a.row(k).end());
    const std::vector<double> w = qr.apply_qt(xk);
    double resid = 0.0;
    for (std::size_t i = rank; i < n; ++i) resid += w[i] * w[i];

    RowSpanDistance out;
    out.value = std::sqrt(resid);
    out.degenerate = rank < n - 1;
    return out;
}

SpectralSummary spectral_summary(const DenseMatrix& a) {
    const std::vector<double> sv = singular_values(a);
    SpectralSummary s;
    s.s1 = sv.front();
    s.sn = sv.back();
    s.kappa_infinite = s.sn <= 1e-12 * std::max(1.0, s.s1);
    if (s.kappa_infinite) {
        s.kappa = std::numeric_limits<double>::infinity();
        s.log_kappa = std::numeric_limits<double>::infinity();
    } else {
        s.kappa = s.s1 / s.sn;
        s.log_kappa = std::log(s.kappa);
    }
    return s;
}

} // namespace rmt
