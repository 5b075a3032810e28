#pragma once

#include <vector>

#include "rmt/matrix.hpp"

namespace rmt {

struct SvdResult {
    std::vector<double> singular_values; // non-increasing
    DenseMatrix u;                       // rows x min(rows,cols), left vectors
    DenseMatrix v;                       // cols x min(rows,cols), right vectors
    bool has_vectors = false;
    int iterations = 0;
};

// Golub-Kahan bidiagonalization followed by implicit-shift QR on the
// bidiagonal. This is the production path for full spectra.
SvdResult golub_kahan_svd(const DenseMatrix& a, bool want_vectors);

// One-sided (Hestenes) Jacobi. Slow and simple; used as the independent
// oracle for the fast path and as the last-resort fallback.
std::vector<double> jacobi_singular_values(const DenseMatrix& a);

// Compact Householder QR of an m x n matrix with m >= n.
class HouseholderQr {
public:
    explicit HouseholderQr(const DenseMatrix& a);

    std::size_t rows() const { return qr_.rows(); }
    std::size_t cols() const { return qr_.cols(); }
    const std::vector<double>& r_diag() const { return rdiag_; }
    double min_abs_r_diag() const;
    double max_abs_r_diag() const;

    // q^T b and q b, with q the full m x m orthogonal factor.
    std::vector<double> apply_qt(std::span<const double> b) const;
    std::vector<double> apply_q(std::span<const double> b) const;

    // Triangular solves with the n x n upper factor.
    std::vector<double> solve_r(std::span<const double> b) const;
    std::vector<double> solve_rt(std::span<const double> b) const;
    // y = R x and y = R^T x
    std::vector<double> apply_r(std::span<const double> x) const;
    std::vector<double> apply_rt(std::span<const double> x) const;

private:
    DenseMatrix qr_;
    std::vector<double> rdiag_;
};

} // namespace rmt
