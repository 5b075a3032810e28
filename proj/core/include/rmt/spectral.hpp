#pragma once

#include <vector>

#include "rmt/matrix.hpp"

namespace rmt {

// Full singular spectrum, non-increasing. Runs the bidiagonalization/QR
// path with vectors and verifies the decomposition residuals before
// returning.
std::vector<double> singular_values(const DenseMatrix& a);

// Least singular value of a square matrix. Fast path is inverse iteration
// on A^T A through a QR factorization, with a residual certificate; falls
// back to the full decomposition when the iteration stalls.
double least_singular_value(const DenseMatrix& a, double tol = 0.0);

// Largest singular value via power iteration on A^T A. The Rayleigh
// quotient gives a certified lower bound and min(frobenius,
// sqrt(norm1*norminf)) a certified upper bound; the returned estimate sits
// inside that bracket.
double operator_norm(const DenseMatrix& a, double tol = 1e-12);

// Unit vector orthogonal to n-1 rows of length n. Sign convention: the
// first coordinate of magnitude > 1e-12 * max|v_i| is positive.
std::vector<double> unit_normal_to_rows(const DenseMatrix& rows);
std::vector<double> unit_normal_to_rows(const std::vector<std::vector<double>>& rows);

struct RowSpanDistance {
    double value = 0.0;
    bool degenerate = false; // the other rows were linearly dependent
};

// Distance from row k (0-based) of a square matrix to the span of the
// other rows.
RowSpanDistance distance_to_row_span(const DenseMatrix& a, std::size_t k);

struct SpectralSummary {
    double s1 = 0.0;
    double sn = 0.0;
    double kappa = 1.0;     // +inf when sn is at the noise floor
    double log_kappa = 0.0; // natural log
    bool kappa_infinite = false;
};

SpectralSummary spectral_summary(const DenseMatrix& a);

} // namespace rmt
