#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rmt/constructions.hpp"
#include "rmt/distributions.hpp"
#include "rmt/matrix.hpp"
#include "rmt/spectral.hpp"
#include "rmt/stats.hpp"

namespace rmt {

// Runs fn(trial) for trial in [0, count) over a worker pool. Results must
// be written to pre-sized slots indexed by trial, which keeps every
// reduction independent of the worker count. The first exception wins and
// is rethrown on the caller thread with the trial index attached.
void parallel_trials(std::int64_t count, int threads,
                     const std::function<void(std::int64_t)>& fn);

// Per-trial seed: all randomness of trial t derives from (master seed, t).
inline std::uint64_t trial_seed(std::uint64_t master, std::int64_t trial) {
    return CounterRng::derive_key(master, 0x7214A1ULL, static_cast<std::uint64_t>(trial));
}

struct TailEstimate {
    double threshold = 0.0;
    std::int64_t trials = 0;
    std::int64_t hits = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;  // Clopper-Pearson, two-sided 95%
    double ci_high = 0.0;
    std::uint64_t seed = 0;
};

TailEstimate make_tail_estimate(double threshold, std::span<const double> values,
                                std::uint64_t seed);

// Least singular values of `trials` independent draws, indexed by trial.
std::vector<double> sample_sn(const ShiftedEnsemble& ensemble, std::int64_t trials,
                              std::uint64_t seed, int threads = 1);

// P(s_n(M + N) <= t) with an exact binomial confidence interval.
TailEstimate tail_probability(const ShiftedEnsemble& ensemble, double t, std::int64_t trials,
                              std::uint64_t seed, int threads = 1);

// One tail curve over a threshold grid, all thresholds sharing one sample
// stream.
struct TailCurve {
    std::size_t n = 0;
    std::vector<double> t_grid;
    std::vector<TailEstimate> estimates;
};

TailCurve tail_curve(const ShiftedEnsemble& ensemble, std::span<const double> t_grid,
                     std::int64_t trials, std::uint64_t seed, int threads = 1);

// Log-log slope of p_hat over the largest window of `decades` decades of t
// whose cells all satisfy p_hat >= min_p_hat.
double loglog_slope_largest_decades(const TailCurve& curve, double min_p_hat,
                                    double decades = 2.0);

// Gaussian ensemble, zero shift; verdict per cell: the estimate does not
// refute p <= sqrt(n) * t at the CI level.
struct EdelmanReport {
    std::size_t n = 0;
    TailCurve curve;
    std::vector<double> bound_values;
    std::vector<bool> verdicts; // ci_low <= bound
};

EdelmanReport edelman_check(std::size_t n, std::span<const double> t_grid, std::int64_t trials,
                            std::uint64_t seed, int threads = 1);

// Shifted-ensemble tail at threshold n^{-(2A+1) gamma}, the norm event
// P(||N|| >= n^gamma) from the same samples, and the condition-number tail
// at 2 n^{(2A+2) gamma}.
struct MainTheoremReport {
    std::size_t n = 0;
    double gamma = 0.5;
    double a_param = 0.0;
    double shift_norm = 0.0;
    double sn_threshold = 0.0;
    double norm_threshold = 0.0;
    double kappa_threshold = 0.0;
    TailEstimate sn_tail;
    TailEstimate norm_tail;
    TailEstimate kappa_tail;
    bool non_informative = false; // A == 0 makes the bound vacuous
};

MainTheoremReport main_theorem_check(const DenseMatrix& shift, const EntryDistribution& dist,
                                     double gamma, double a_param, std::int64_t trials,
                                     std::uint64_t seed, int threads = 1);

// The adversarial-shift experiment: per L, the distribution of s_n, the
// zero-sum sign event from the first noise row, and ||M_n v|| for the
// normal-vector profile on that event. Ratios between consecutive grid
// entries use the event-conditional medians (the 1/L scaling lives on the
// rich event).
struct ConstructionRow {
    double shift_scale = 0.0; // L
    std::int64_t trials = 0;
    std::int64_t event_hits = 0;
    double event_freq = 0.0;
    double event_expected = 0.0;     // C(n, n/2) / 2^n
    bool event_consistent = false;   // within 3 binomial SE
    double median_sn_all = 0.0;
    double median_sn_event = 0.0;
    double median_mnv_event = 0.0;   // median ||M_n v|| on the event
    double mnv_scaling_const = 0.0;  // median_mnv_event / (n / L)
    double shift_norm = 0.0;
    std::vector<double> sn_histogram_edges;
    std::vector<std::int64_t> sn_histogram_counts;
    std::vector<double> sn_deciles;
};

struct ConstructionReport {
    std::size_t n = 0;
    std::vector<ConstructionRow> rows;
    std::vector<double> scaling_ratios; // median_sn_event(L_i) / median_sn_event(L_{i+1})
};

ConstructionReport construction_check(std::size_t n, std::span<const double> l_grid,
                                      std::int64_t trials, std::uint64_t seed, int threads = 1);

// Operator norm growth survey: ||N|| / sqrt(n), the max-row/max-column
// Euclidean norm bound, and the Frobenius comparison, per n.
struct NormSurveyRow {
    std::size_t n = 0;
    std::int64_t trials = 0;
    double mean_norm = 0.0;
    double mean_norm_over_sqrt_n = 0.0;
    double max_norm_over_sqrt_n = 0.0;
    double row_col_bound = 0.0;      // E max_i ||row_i|| + E max_j ||col_j||
    double norm_to_bound_ratio = 0.0;
    double mean_frobenius = 0.0;
    bool norm_le_frobenius = false; // held for every sample
};

struct NormSurveyReport {
    std::vector<NormSurveyRow> rows;
};

NormSurveyReport norm_survey(const EntryDistribution& dist, std::span<const std::size_t> n_grid,
                             std::int64_t trials, std::uint64_t seed, int threads = 1);

// Per-trial spectral summaries of an ensemble.
struct SpectrumReport {
    std::size_t n = 0;
    std::vector<SpectralSummary> summaries; // indexed by trial
};

SpectrumReport spectrum_survey(const ShiftedEnsemble& ensemble, std::int64_t trials,
                               std::uint64_t seed, int threads = 1);

} // namespace rmt
