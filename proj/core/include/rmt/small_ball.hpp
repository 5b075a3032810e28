#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rmt/distributions.hpp"

namespace rmt {

enum class SmallBallMethod { exact, mc, fourier_bound };

// sup_z P(|xi_1 v_1 + ... + xi_n v_n - z| <= eps), or an upper bound on
// it, depending on the method. The dot product is bilinear (no
// conjugation) so complex weights behave like the scalar sum they stand
// for.
struct SmallBallResult {
    std::vector<std::complex<double>> v;
    double eps = 0.0;
    double rho = 0.0;
    std::complex<double> z_star{0.0, 0.0};
    SmallBallMethod method = SmallBallMethod::exact;

    // Monte Carlo extras: a one-sided confident upper bound for the true
    // supremum (the empirical maximum is selection-biased upward, and the
    // Clopper-Pearson bound on it inherits that direction).
    double rho_upper = 0.0;
    double confidence = 0.0;

    // Fourier-bound extras.
    bool clamped = false;     // raw bound exceeded 1 and was clamped
    double raw_bound = 0.0;   // esseen_c * r^2 * quadrature, before clamping
    double surrogate = 0.0;   // same scaling with the exp(-8 sum ||w v_j||^2) integrand
};

// Exact enumeration over all atom assignments of a discrete law. For
// eps > 0 with real-valued sums the optimal interval is found by an
// edge-anchored sweep; for complex sums the optimal disk is searched over
// atom-sum centers and circle-circle intersection candidates.
SmallBallResult small_ball_exact(const EntryDistribution& dist,
                                 std::span<const std::complex<double>> v, double eps,
                                 std::size_t budget = std::size_t{1} << 24);

SmallBallResult small_ball_mc(const EntryDistribution& dist,
                              std::span<const std::complex<double>> v, double eps,
                              std::int64_t trials, std::uint64_t seed,
                              double confidence = 0.975);

struct LevyNorm {
    std::complex<double> z{0.0, 0.0};
    double value = 0.0; // in [0, 1]
};

// Root-mean-square distance of Re(z (xi - xi')) to the nearest integer.
// Exact pair sums for discrete laws; fixed-seed Monte Carlo (1e5 pairs)
// otherwise.
LevyNorm levy_norm(const EntryDistribution& dist, std::complex<double> z);

// Esseen-type bound: esseen_c * r^2 * integral over |w| <= 1/r of the
// product of per-coordinate characteristic-function moduli. Calibrated
// once against exact enumeration on a frozen Bernoulli instance set; see
// kDefaultEsseenC.
SmallBallResult fourier_upper_bound(const EntryDistribution& dist,
                                    std::span<const std::complex<double>> v, double r,
                                    double esseen_c);

// Calibrated default for the Esseen constant (see tools/ calibration and
// the dominance acceptance check).
inline constexpr double kDefaultEsseenC = 0.7;

struct CompressibilityVerdict {
    double a = 0.0;
    double b = 0.0;
    bool compressible = false;
    std::vector<std::complex<double>> witness; // best sparse approximant, full length
    double distance = 0.0;                     // || v - witness ||
    std::size_t support = 0;                   // nonzeros allowed, ceil(a*n)
};

// Optimal sparse approximation: keeping the ceil(a*n) largest-magnitude
// coordinates minimizes the distance over all supports of that size.
CompressibilityVerdict classify_compressible(std::span<const std::complex<double>> v, double a,
                                             double b);

struct RichVerdict {
    bool member = false;
    bool certain = false; // exact enumeration was feasible
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double threshold = 0.0;
};

// Is v in the rich set S_{eps, rho}? Exact when enumeration fits the
// budget, Monte Carlo with a two-sided confidence statement otherwise.
RichVerdict rich_membership(const EntryDistribution& dist,
                            std::span<const std::complex<double>> v, double eps, double rho,
                            std::int64_t trials, std::uint64_t seed,
                            std::size_t budget = std::size_t{1} << 24);

std::vector<std::complex<double>> to_complex(std::span<const double> v);

} // namespace rmt
