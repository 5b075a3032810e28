#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/small_ball.hpp"

namespace rmt {

namespace {

using Cplx = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |E e(Re(xi z))|^2 of the effective law. For a real-valued base law this
// only depends on Re(z e^{i phase}); complex atoms are summed directly.
class CharFnModulusSq {
public:
    explicit CharFnModulusSq(const EntryDistribution& dist) : dist_(dist) {
        discrete_ = dist.is_discrete();
        if (discrete_) atoms_ = dist.atoms();
        phase_rot_ = std::polar(1.0, dist.phase());
    }

    double operator()(Cplx z) const {
        if (discrete_) {
            double re = 0.0, im = 0.0;
            for (const auto& a : atoms_) {
                const double t = kTwoPi * (a.value * z).real();
                re += a.prob * std::cos(t);
                im += a.prob * std::sin(t);
            }
            return re * re + im * im;
        }
        const double x = (z * phase_rot_).real();
        switch (dist_.kind()) {
            case DistKind::gaussian: {
                const double t = kTwoPi * x;
                return std::exp(-t * t);
            }
            case DistKind::uniform: {
                const double lo = dist_.param_lo(), hi = dist_.param_hi();
                if (std::abs(x) < 1e-14) return 1.0;
                const double den = kTwoPi * x * (hi - lo);
                const double re = (std::sin(kTwoPi * x * hi) - std::sin(kTwoPi * x * lo)) / den;
                const double im = (std::cos(kTwoPi * x * lo) - std::cos(kTwoPi * x * hi)) / den;
                return re * re + im * im;
            }
            case DistKind::truncated_gaussian:
                return truncated_gaussian_cf_sq(x);
            default:
                throw ValidationError("fourier bound: unsupported continuous law " + dist_.name());
        }
    }

private:
    // symmetric law: CF is real and even; oscillation-aware Simpson rule
    double truncated_gaussian_cf_sq(double x) const {
        const double t_max = dist_.param_t();
        const double ax = std::abs(x);
        const auto intervals = static_cast<int>(
            std::min(40000.0, std::max(256.0, 24.0 * ax * t_max)));
        const int m = intervals + (intervals % 2); // Simpson needs even count
        const double h = t_max / m;
        double acc = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double t = i * h;
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += w * std::cos(kTwoPi * x * t) * std::exp(-0.5 * t * t);
        }
        acc *= h / 3.0; // = integral of cos(2 pi x t) e^{-t^2/2} over [0, T]
        const double cf = 2.0 * acc /
                          (std::sqrt(2.0 * std::numbers::pi) * std::erf(t_max / std::sqrt(2.0)));
        return cf * cf;
    }

    const EntryDistribution& dist_;
    bool discrete_ = false;
    std::vector<Atom> atoms_;
    Cplx phase_rot_{1.0, 0.0};
};

// ||z||_j^2 evaluator for the surrogate integrand; exact for discrete
// laws, table-backed shared-pair Monte Carlo for continuous ones.
class LevyNormSq {
public:
    LevyNormSq(const EntryDistribution& dist, double xmax) : dist_(dist) {
        if (dist.is_discrete()) {
            atoms_ = dist.atoms();
            return;
        }
        // Real continuous law: ||z||_j depends on Re(z e^{i phase}) only.
        // One shared pair sample across all table entries.
        constexpr std::size_t kPairs = 10'000;
        CounterRng rng(0x11E7ULL, 0x7AB1EULL);
        const EntryDistribution base = dist.rotated(-dist.phase());
        std::vector<double> diffs(kPairs);
        double spread = 0.0;
        for (auto& d : diffs) {
            d = base.draw(rng).real() - base.draw(rng).real();
            spread = std::max(spread, std::abs(d));
        }
        pitch_ = 1.0 / std::max(40.0 * spread, 64.0);
        const auto entries = static_cast<std::size_t>(xmax / pitch_) + 2;
        table_.resize(entries);
        for (std::size_t i = 0; i < entries; ++i) {
            const double x = static_cast<double>(i) * pitch_;
            double acc = 0.0;
            for (double d : diffs) {
                const double y = x * d;
                const double f = std::abs(y - std::round(y));
                acc += f * f;
            }
            table_[i] = acc / static_cast<double>(kPairs);
        }
    }

    double operator()(Cplx z) const {
        if (!atoms_.empty()) {
            double acc = 0.0;
            for (const auto& a : atoms_) {
                for (const auto& b : atoms_) {
                    const double y = (z * (a.value - b.value)).real();
                    const double f = std::abs(y - std::round(y));
                    acc += a.prob * b.prob * f * f;
                }
            }
            return acc;
        }
        const double x = std::abs((z * std::polar(1.0, dist_.phase())).real());
        const double idx = x / pitch_;
        const auto i0 = static_cast<std::size_t>(idx);
        if (i0 + 1 >= table_.size()) return table_.back();
        const double frac = idx - static_cast<double>(i0);
        return table_[i0] * (1.0 - frac) + table_[i0 + 1] * frac;
    }

private:
    const EntryDistribution& dist_;
    std::vector<Atom> atoms_;
    std::vector<double> table_;
    double pitch_ = 1.0;
};

struct QuadraturePair {
    double q_charfn = 0.0;
    double q_surrogate = 0.0;
};

// Integral over the disk |w| <= radius, by column: exact y-limits per x
// column (no boundary indicator), midpoint in both directions. For real
// laws with real weights the integrand is constant in y, so the column
// count stays small.
QuadraturePair disk_integral(const CharFnModulusSq& charfn, const LevyNormSq& levy,
                             std::span<const Cplx> v, double radius, int nx, int ny) {
    QuadraturePair acc;
    const double hx = 2.0 * radius / nx;
    for (int i = 0; i < nx; ++i) {
        const double x = -radius + (i + 0.5) * hx;
        const double ylim = std::sqrt(std::max(0.0, radius * radius - x * x));
        if (ylim == 0.0) continue;
        const double hy = 2.0 * ylim / ny;
        double col_cf = 0.0, col_sur = 0.0;
        for (int j = 0; j < ny; ++j) {
            const double y = -ylim + (j + 0.5) * hy;
            const Cplx w{x, y};
            double log_prod = 0.0;
            double sum_levy = 0.0;
            for (const auto& vj : v) {
                const Cplx z = w * vj;
                const double f = charfn(z);
                log_prod += 0.5 * std::log(std::max(f, 1e-300));
                sum_levy += levy(z);
            }
            col_cf += std::exp(log_prod);
            col_sur += std::exp(-8.0 * sum_levy);
        }
        acc.q_charfn += col_cf * hy * hx;
        acc.q_surrogate += col_sur * hy * hx;
    }
    return acc;
}

} // namespace

SmallBallResult fourier_upper_bound(const EntryDistribution& dist, std::span<const Cplx> v,
                                    double r, double esseen_c) {
    if (v.empty()) throw ValidationError("fourier_upper_bound: empty weight vector");
    if (!(r > 0.0)) throw ValidationError("fourier_upper_bound: r must be positive");
    if (!(esseen_c > 0.0)) throw ValidationError("fourier_upper_bound: esseen_c must be positive");

    const double radius = 1.0 / r;
    double max_v = 0.0;
    bool y_dependent = !dist.is_real();
    for (const auto& x : v) {
        max_v = std::max(max_v, std::abs(x));
        if (x.imag() != 0.0) y_dependent = true;
    }
    if (max_v == 0.0) throw ValidationError("fourier_upper_bound: zero weight vector");

    const CharFnModulusSq charfn(dist);
    const LevyNormSq levy(dist, radius * max_v + 1.0);

    // Base resolution follows the fastest oscillation of the integrand,
    // about one period per 1/(2 max|v_j|) in the x direction.
    const double target = 80.0 * radius * max_v;
    int nx = 256;
    while (nx < target && nx < 16384) nx *= 2;
    int ny = y_dependent ? std::max(64, std::min(nx, 2048)) : 8;

    double q = 0.0, q_sur = 0.0;
    double achieved = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int level = 0; level < 4; ++level) {
        const QuadraturePair next = disk_integral(charfn, levy, v, radius, nx, ny);
        if (level > 0) {
            achieved = std::abs(next.q_charfn - q) / std::max(next.q_charfn, 1e-300);
            if (achieved <= 1e-4) {
                q = next.q_charfn;
                q_sur = next.q_surrogate;
                converged = true;
                break;
            }
        }
        q = next.q_charfn;
        q_sur = next.q_surrogate;
        nx *= 2;
        if (y_dependent) ny *= 2;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "fourier_upper_bound: quadrature refinement stalled at relative change "
            << achieved;
        throw NumericalError(msg.str());
    }

    SmallBallResult res;
    res.v.assign(v.begin(), v.end());
    res.eps = r;
    res.method = SmallBallMethod::fourier_bound;
    res.raw_bound = esseen_c * r * r * q;
    res.surrogate = esseen_c * r * r * q_sur;
    res.rho = res.raw_bound;
    if (res.rho > 1.0) {
        res.rho = 1.0;
        res.clamped = true;
    }
    return res;
}

} // namespace rmt
