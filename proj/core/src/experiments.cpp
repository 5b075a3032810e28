#include "rmt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "rmt/errors.hpp"

namespace rmt {

void parallel_trials(std::int64_t count, int threads,
                     const std::function<void(std::int64_t)>& fn) {
    if (count < 0) throw ValidationError("parallel_trials: negative count");
    if (count == 0) return;
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (std::int64_t t = 0; t < count; ++t) {
            try {
                fn(t);
            } catch (const std::exception& e) {
                std::ostringstream msg;
                msg << e.what() << " (trial " << t << ")";
                throw NumericalError(msg.str());
            }
        }
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::string first_error;
    std::int64_t first_error_trial = -1;

    auto worker = [&]() {
        while (true) {
            const std::int64_t t = next.fetch_add(1);
            if (t >= count) return;
            {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error.empty()) return;
            }
            try {
                fn(t);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty() || t < first_error_trial) {
                    first_error = e.what();
                    first_error_trial = t;
                }
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (!first_error.empty()) {
        std::ostringstream msg;
        msg << first_error << " (trial " << first_error_trial << ")";
        throw NumericalError(msg.str());
    }
}

TailEstimate make_tail_estimate(double threshold, std::span<const double> values,
                                std::uint64_t seed) {
    TailEstimate est;
    est.threshold = threshold;
    est.trials = static_cast<std::int64_t>(values.size());
    est.seed = seed;
    for (double v : values)
        if (v <= threshold) ++est.hits;
    est.p_hat = static_cast<double>(est.hits) / static_cast<double>(est.trials);
    const BinomialInterval ci = clopper_pearson(est.hits, est.trials);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

std::vector<double> sample_sn(const ShiftedEnsemble& ensemble, std::int64_t trials,
                              std::uint64_t seed, int threads) {
    std::vector<double> sn(trials, 0.0);
    parallel_trials(trials, threads, [&](std::int64_t t) {
        const DenseMatrix m = sample_shifted(ensemble, trial_seed(seed, t));
        sn[t] = least_singular_value(m);
    });
    return sn;
}

TailEstimate tail_probability(const ShiftedEnsemble& ensemble, double t, std::int64_t trials,
                              std::uint64_t seed, int threads) {
    if (trials < 100) throw ValidationError("tail_probability: need trials >= 100");
    const std::vector<double> sn = sample_sn(ensemble, trials, seed, threads);
    return make_tail_estimate(t, sn, seed);
}

TailCurve tail_curve(const ShiftedEnsemble& ensemble, std::span<const double> t_grid,
                     std::int64_t trials, std::uint64_t seed, int threads) {
    if (trials < 100) throw ValidationError("tail_curve: need trials >= 100");
    if (t_grid.empty()) throw ValidationError("tail_curve: empty threshold grid");
    TailCurve curve;
    curve.n = ensemble.n;
    curve.t_grid.assign(t_grid.begin(), t_grid.end());
    const std::vector<double> sn = sample_sn(ensemble, trials, seed, threads);
    for (double t : t_grid) curve.estimates.push_back(make_tail_estimate(t, sn, seed));
    return curve;
}

double loglog_slope_largest_decades(const TailCurve& curve, double min_p_hat, double decades) {
    double t_hi = 0.0;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        if (curve.estimates[i].p_hat >= min_p_hat && curve.estimates[i].threshold > 0.0)
            t_hi = std::max(t_hi, curve.estimates[i].threshold);
    }
    if (t_hi <= 0.0)
        throw NumericalError("loglog_slope: no cell clears the minimum p_hat");
    const double t_lo = t_hi * std::pow(10.0, -decades);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < curve.t_grid.size(); ++i) {
        const TailEstimate& e = curve.estimates[i];
        if (e.threshold >= t_lo * (1.0 - 1e-12) && e.threshold <= t_hi * (1.0 + 1e-12) &&
            e.p_hat >= min_p_hat) {
            lx.push_back(std::log10(e.threshold));
            ly.push_back(std::log10(e.p_hat));
        }
    }
    if (lx.size() < 3)
        throw NumericalError("loglog_slope: fewer than 3 usable cells in the window");
    return ols_slope(lx, ly);
}

EdelmanReport edelman_check(std::size_t n, std::span<const double> t_grid, std::int64_t trials,
                            std::uint64_t seed, int threads) {
    EdelmanReport rep;
    rep.n = n;
    const ShiftedEnsemble e = ShiftedEnsemble::centered(n, EntryDistribution::gaussian());
    rep.curve = tail_curve(e, t_grid, trials, seed, threads);
    for (const TailEstimate& est : rep.curve.estimates) {
        const double bound = std::sqrt(static_cast<double>(n)) * est.threshold;
        rep.bound_values.push_back(bound);
        rep.verdicts.push_back(est.ci_low <= bound);
    }
    return rep;
}

MainTheoremReport main_theorem_check(const DenseMatrix& shift, const EntryDistribution& dist,
                                     double gamma, double a_param, std::int64_t trials,
                                     std::uint64_t seed, int threads) {
    if (!(gamma >= 0.5)) throw ValidationError("main_theorem_check: need gamma >= 1/2");
    if (!(a_param >= 0.0)) throw ValidationError("main_theorem_check: need A >= 0");
    if (trials < 100) throw ValidationError("main_theorem_check: need trials >= 100");
    const ShiftedEnsemble ensemble(shift, dist);
    const std::size_t n = ensemble.n;
    const double nd = static_cast<double>(n);

    MainTheoremReport rep;
    rep.n = n;
    rep.gamma = gamma;
    rep.a_param = a_param;
    rep.norm_threshold = std::pow(nd, gamma);
    rep.shift_norm = operator_norm(shift, 1e-10);
    if (rep.shift_norm > rep.norm_threshold) {
        std::ostringstream msg;
        msg << "main_theorem_check: hypothesis ||M|| <= n^gamma violated (||M|| = "
            << rep.shift_norm << ", n^gamma = " << rep.norm_threshold << ")";
        throw ValidationError(msg.str());
    }
    rep.sn_threshold = std::pow(nd, -(2.0 * a_param + 1.0) * gamma);
    rep.kappa_threshold = 2.0 * std::pow(nd, (2.0 * a_param + 2.0) * gamma);
    rep.non_informative = a_param == 0.0;

    // one sample stream serves all three tails
    std::vector<double> sn(trials), noise_norm(trials), kappa(trials);
    parallel_trials(trials, threads, [&](std::int64_t t) {
        const std::uint64_t ts = trial_seed(seed, t);
        const DenseMatrix noise = sample_noise(ensemble.entry_law, n, ts);
        DenseMatrix m = noise;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) += shift(i, j);
        sn[t] = least_singular_value(m);
        noise_norm[t] = operator_norm(noise, 1e-9);
        const double s1 = operator_norm(m, 1e-9);
        kappa[t] = sn[t] > 0.0 ? s1 / sn[t] : std::numeric_limits<double>::infinity();
    });

    rep.sn_tail = make_tail_estimate(rep.sn_threshold, sn, seed);
    // the norm and kappa events are lower tails of the negated values
    std::vector<double> neg_norm(noise_norm.size()), neg_kappa(kappa.size());
    for (std::size_t i = 0; i < noise_norm.size(); ++i) neg_norm[i] = -noise_norm[i];
    for (std::size_t i = 0; i < kappa.size(); ++i)
        neg_kappa[i] = std::isinf(kappa[i]) ? -std::numeric_limits<double>::max() : -kappa[i];
    rep.norm_tail = make_tail_estimate(-rep.norm_threshold, neg_norm, seed);
    rep.norm_tail.threshold = rep.norm_threshold;
    rep.kappa_tail = make_tail_estimate(-rep.kappa_threshold, neg_kappa, seed);
    rep.kappa_tail.threshold = rep.kappa_threshold;
    return rep;
}

namespace {

std::vector<double> deciles(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (int d = 1; d <= 9; ++d) {
        const double pos = d / 10.0 * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        const double val = lo + 1 < v.size() ? v[lo] * (1.0 - frac) + v[lo + 1] * frac : v[lo];
        out.push_back(val);
    }
    return out;
}

double expected_zero_sum_probability(std::size_t n) {
    if (n <= 62) return central_binomial_probability(static_cast<int>(n));
    const double nd = static_cast<double>(n);
    return std::exp(std::lgamma(nd + 1.0) - 2.0 * std::lgamma(nd / 2.0 + 1.0) -
                    nd * std::log(2.0));
}

} // namespace

ConstructionReport construction_check(std::size_t n, std::span<const double> l_grid,
                                      std::int64_t trials, std::uint64_t seed, int threads) {
    if (trials < 1) throw ValidationError("construction_check: need trials >= 1");
    if (l_grid.empty()) throw ValidationError("construction_check: empty L grid");
    ConstructionReport rep;
    rep.n = n;
    const EntryDistribution law = EntryDistribution::bernoulli();

    for (double big_l : l_grid) {
        const DenseMatrix shift = adversarial_matrix(n, big_l); // validates n even, L >= n
        const ShiftedEnsemble ensemble(shift, law);

        std::vector<double> sn(trials), mnv(trials);
        std::vector<char> on_event(trials, 0);
        parallel_trials(trials, threads, [&](std::int64_t t) {
            const DenseMatrix m = sample_shifted(ensemble, trial_seed(seed, t));
            sn[t] = least_singular_value(m);
            // sign event from the first noise row (the shift row is zero)
            double total = 0.0;
            for (std::size_t j = 0; j + 1 < n; ++j) total += m(0, j);
            total -= m(0, n - 1);
            on_event[t] = std::abs(total) < 0.5 ? 1 : 0;
            const NormalProfile profile = normal_vector_profile(m);
            mnv[t] = norm2(m.apply(profile.v));
        });

        ConstructionRow row;
        row.shift_scale = big_l;
        row.trials = trials;
        row.shift_norm = operator_norm(shift, 1e-10);
        row.event_expected = expected_zero_sum_probability(n);
        std::vector<double> sn_event, mnv_event;
        for (std::int64_t t = 0; t < trials; ++t) {
            if (on_event[t]) {
                ++row.event_hits;
                sn_event.push_back(sn[t]);
                mnv_event.push_back(mnv[t]);
            }
        }
        row.event_freq = static_cast<double>(row.event_hits) / static_cast<double>(trials);
        const double se = std::sqrt(row.event_expected * (1.0 - row.event_expected) /
                                    static_cast<double>(trials));
        row.event_consistent = std::abs(row.event_freq - row.event_expected) <= 3.0 * se;
        row.median_sn_all = median(sn);
        if (!sn_event.empty()) {
            row.median_sn_event = median(sn_event);
            row.median_mnv_event = median(mnv_event);
            row.mnv_scaling_const =
                row.median_mnv_event / (static_cast<double>(n) / big_l);
        }

        // fixed 40-bin histogram of s_n over [0, max]
        double sn_max = 0.0;
        for (double v : sn) sn_max = std::max(sn_max, v);
        const int bins = 40;
        row.sn_histogram_counts.assign(bins, 0);
        for (int b = 0; b <= bins; ++b)
            row.sn_histogram_edges.push_back(sn_max * b / bins);
        for (double v : sn) {
            auto b = sn_max > 0.0 ? static_cast<int>(v / sn_max * bins) : 0;
            b = std::min(b, bins - 1);
            ++row.sn_histogram_counts[b];
        }
        row.sn_deciles = deciles(sn);
        rep.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
        const double a = rep.rows[i].median_sn_event;
        const double b = rep.rows[i + 1].median_sn_event;
        rep.scaling_ratios.push_back(b > 0.0 ? a / b : 0.0);
    }
    return rep;
}

NormSurveyReport norm_survey(const EntryDistribution& dist, std::span<const std::size_t> n_grid,
                             std::int64_t trials, std::uint64_t seed, int threads) {
    if (trials < 1) throw ValidationError("norm_survey: need trials >= 1");
    if (std::abs(dist.mean()) > 1e-12 || std::abs(dist.variance() - 1.0) > 1e-12)
        throw ValidationError("norm_survey: law must have mean zero and variance one");
    NormSurveyReport rep;
    for (std::size_t n : n_grid) {
        std::vector<double> norms(trials), rowcol(trials), fros(trials);
        std::vector<char> le_frob(trials, 1);
        parallel_trials(trials, threads, [&](std::int64_t t) {
            const DenseMatrix noise = sample_noise(dist, n, trial_seed(seed, t));
            const double op = operator_norm(noise, 1e-9);
            const double fro = noise.frobenius_norm();
            norms[t] = op;
            fros[t] = fro;
            le_frob[t] = op <= fro * (1.0 + 1e-9) ? 1 : 0;
            double max_row = 0.0, max_col = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double r = 0.0, c = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    r += noise(i, j) * noise(i, j);
                    c += noise(j, i) * noise(j, i);
                }
                max_row = std::max(max_row, std::sqrt(r));
                max_col = std::max(max_col, std::sqrt(c));
            }
            rowcol[t] = max_row + max_col;
        });

        NormSurveyRow row;
        row.n = n;
        row.trials = trials;
        const double sqrt_n = std::sqrt(static_cast<double>(n));
        double sum_norm = 0.0, sum_rowcol = 0.0, sum_fro = 0.0, max_norm = 0.0;
        bool all_le = true;
        for (std::int64_t t = 0; t < trials; ++t) {
            sum_norm += norms[t];
            sum_rowcol += rowcol[t];
            sum_fro += fros[t];
            max_norm = std::max(max_norm, norms[t]);
            all_le = all_le && le_frob[t];
        }
        row.mean_norm = sum_norm / static_cast<double>(trials);
        row.mean_norm_over_sqrt_n = row.mean_norm / sqrt_n;
        row.max_norm_over_sqrt_n = max_norm / sqrt_n;
        row.row_col_bound = sum_rowcol / static_cast<double>(trials);
        row.norm_to_bound_ratio = row.mean_norm / row.row_col_bound;
        row.mean_frobenius = sum_fro / static_cast<double>(trials);
        row.norm_le_frobenius = all_le;
        rep.rows.push_back(row);
    }
    return rep;
}

SpectrumReport spectrum_survey(const ShiftedEnsemble& ensemble, std::int64_t trials,
                               std::uint64_t seed, int threads) {
    if (trials < 1) throw ValidationError("spectrum_survey: need trials >= 1");
    SpectrumReport rep;
    rep.n = ensemble.n;
    rep.summaries.resize(trials);
    parallel_trials(trials, threads, [&](std::int64_t t) {
        const DenseMatrix m = sample_shifted(ensemble, trial_seed(seed, t));
        rep.summaries[t] = spectral_summary(m);
    });
    return rep;
}

} // namespace rmt
