#include "rmt/small_ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/stats.hpp"

namespace rmt {

namespace {

using Cplx = std::complex<double>;

bool weights_real(std::span<const Cplx> v) {
    for (const auto& x : v)
        if (x.imag() != 0.0) return false;
    return true;
}

bool atoms_real(const std::vector<Atom>& atoms) {
    for (const auto& a : atoms)
        if (std::abs(a.value.imag()) > 1e-15 * (1.0 + std::abs(a.value.real()))) return false;
    return true;
}

// Clustering tolerance for grouping floating-point sums that agree up to
// roundoff. Atom sums of interest are separated by fixed gaps, far above
// this floor.
double cluster_tol(double scale) { return 1e-9 * std::max(1.0, scale); }

struct WeightedPoint {
    double x = 0.0; // or Re for complex points
    double y = 0.0;
    double mass = 0.0;
};

// Exhaustive walk over atom assignments; calls sink(sum, prob) at each
// leaf. Complex accumulation covers the real case with zero imaginary
// parts at no extra asymptotic cost, but the hot real path below uses its
// own specialization to halve memory.
void enumerate_sums_complex(const std::vector<Atom>& atoms, std::span<const Cplx> v,
                            std::vector<WeightedPoint>& out) {
    const std::size_t n = v.size();
    std::vector<std::size_t> digit(n, 0);
    std::vector<Cplx> partial(n + 1, Cplx{0.0, 0.0});
    std::vector<double> pprob(n + 1, 1.0);
    std::size_t level = 0;
    while (true) {
        if (level == n) {
            out.push_back({partial[n].real(), partial[n].imag(), pprob[n]});
            // backtrack
            while (level > 0 && ++digit[level - 1] == atoms.size()) {
                digit[level - 1] = 0;
                --level;
            }
            if (level == 0) break;
            --level;
        }
        const Atom& a = atoms[digit[level]];
        partial[level + 1] = partial[level] + a.value * v[level];
        pprob[level + 1] = pprob[level] * a.prob;
        ++level;
    }
}

void enumerate_sums_real(const std::vector<Atom>& atoms, std::span<const Cplx> v,
                         std::vector<WeightedPoint>& out) {
    const std::size_t n = v.size();
    std::vector<std::size_t> digit(n, 0);
    std::vector<double> partial(n + 1, 0.0);
    std::vector<double> pprob(n + 1, 1.0);
    std::size_t level = 0;
    while (true) {
        if (level == n) {
            out.push_back({partial[n], 0.0, pprob[n]});
            while (level > 0 && ++digit[level - 1] == atoms.size()) {
                digit[level - 1] = 0;
                --level;
            }
            if (level == 0) break;
            --level;
        }
        const Atom& a = atoms[digit[level]];
        partial[level + 1] = partial[level] + a.value.real() * v[level].real();
        pprob[level + 1] = pprob[level] * a.prob;
        ++level;
    }
}

// Merge coincident (up to roundoff) 1-d points; input gets sorted by x.
void cluster_real(std::vector<WeightedPoint>& pts) {
    std::sort(pts.begin(), pts.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) { return a.x < b.x; });
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, std::abs(p.x));
    const double tol = cluster_tol(scale);
    std::vector<WeightedPoint> merged;
    for (const auto& p : pts) {
        if (!merged.empty() && p.x - merged.back().x <= tol) {
            merged.back().mass += p.mass;
        } else {
            merged.push_back(p);
        }
    }
    pts = std::move(merged);
}

void cluster_complex(std::vector<WeightedPoint>& pts) {
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double tol = cluster_tol(scale);
    std::sort(pts.begin(), pts.end(), [](const WeightedPoint& a, const WeightedPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<WeightedPoint> merged;
    for (const auto& p : pts) {
        bool absorbed = false;
        for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
            if (p.x - it->x > tol) break;
            if (std::abs(p.y - it->y) <= tol) {
                it->mass += p.mass;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(p);
    }
    pts = std::move(merged);
}

// Best closed interval of length 2*eps over weighted points on the line;
// an optimal interval can start at a point instead of straddling freely.
std::pair<double, double> best_window_real(const std::vector<WeightedPoint>& sorted, double eps) {
    double scale = 0.0;
    for (const auto& p : sorted) scale = std::max(scale, std::abs(p.x));
    const double guard = cluster_tol(scale);
    double best_mass = 0.0, best_center = 0.0;
    std::size_t right = 0;
    double window = 0.0;
    for (std::size_t left = 0; left < sorted.size(); ++left) {
        if (right < left) {
            right = left;
            window = 0.0;
        }
        while (right < sorted.size() && sorted[right].x <= sorted[left].x + 2.0 * eps + guard) {
            window += sorted[right].mass;
            ++right;
        }
        if (window > best_mass) {
            best_mass = window;
            best_center = sorted[left].x + eps;
        }
        window -= sorted[left].mass;
    }
    return {best_mass, best_center};
}

double mass_in_disk(const std::vector<WeightedPoint>& pts, double cx, double cy, double radius) {
    const double r2 = radius * radius;
    double m = 0.0;
    for (const auto& p : pts) {
        const double dx = p.x - cx, dy = p.y - cy;
        if (dx * dx + dy * dy <= r2) m += p.mass;
    }
    return m;
}

// Exact best disk of fixed radius over weighted points in the plane:
// an optimal disk can be centered on a point or have two points on its
// boundary.
std::pair<double, Cplx> best_disk_complex(const std::vector<WeightedPoint>& pts, double eps) {
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double guard = cluster_tol(scale);
    const double radius = eps + guard;

    double best_mass = 0.0;
    Cplx best_center{0.0, 0.0};
    auto consider = [&](double cx, double cy) {
        const double m = mass_in_disk(pts, cx, cy, radius);
        if (m > best_mass) {
            best_mass = m;
            best_center = {cx, cy};
        }
    };
    for (const auto& p : pts) consider(p.x, p.y);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[j].x - pts[i].x, dy = pts[j].y - pts[i].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 > 4.0 * eps * eps || d2 == 0.0) continue;
            const double mx = 0.5 * (pts[i].x + pts[j].x), my = 0.5 * (pts[i].y + pts[j].y);
            const double h = std::sqrt(std::max(0.0, eps * eps - 0.25 * d2));
            const double d = std::sqrt(d2);
            const double ux = -dy / d, uy = dx / d;
            consider(mx + h * ux, my + h * uy);
            consider(mx - h * ux, my - h * uy);
        }
    }
    return {best_mass, best_center};
}

} // namespace

std::vector<Cplx> to_complex(std::span<const double> v) {
    std::vector<Cplx> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

SmallBallResult small_ball_exact(const EntryDistribution& dist, std::span<const Cplx> v,
                                 double eps, std::size_t budget) {
    if (!dist.is_discrete())
        throw ValidationError("small_ball_exact: continuous law; use small_ball_mc");
    if (v.empty()) throw ValidationError("small_ball_exact: empty weight vector");
    if (!(eps >= 0.0)) throw ValidationError("small_ball_exact: eps must be >= 0");

    const std::vector<Atom> atoms = dist.atoms();
    const double combos = std::pow(static_cast<double>(atoms.size()),
                                   static_cast<double>(v.size()));
    if (combos > static_cast<double>(budget)) {
        std::ostringstream msg;
        msg << "small_ball_exact: enumeration needs " << combos << " assignments, budget is "
            << budget;
        throw ValidationError(msg.str());
    }

    SmallBallResult res;
    res.v.assign(v.begin(), v.end());
    res.eps = eps;
    res.method = SmallBallMethod::exact;

    const bool real_case = atoms_real(atoms) && weights_real(v);
    std::vector<WeightedPoint> pts;
    pts.reserve(static_cast<std::size_t>(combos));
    if (real_case) {
        enumerate_sums_real(atoms, v, pts);
        cluster_real(pts);
        if (std::isinf(eps)) {
            res.rho = 1.0;
            res.z_star = {pts.front().x, 0.0};
            return res;
        }
        if (eps == 0.0) {
            const auto it = std::max_element(
                pts.begin(), pts.end(),
                [](const WeightedPoint& a, const WeightedPoint& b) { return a.mass < b.mass; });
            res.rho = it->mass;
            res.z_star = {it->x, 0.0};
        } else {
            auto [mass, center] = best_window_real(pts, eps);
            res.rho = mass;
            res.z_star = {center, 0.0};
        }
    } else {
        enumerate_sums_complex(atoms, v, pts);
        cluster_complex(pts);
        if (std::isinf(eps)) {
            res.rho = 1.0;
            res.z_star = {pts.front().x, pts.front().y};
            return res;
        }
        if (eps == 0.0) {
            const auto it = std::max_element(
                pts.begin(), pts.end(),
                [](const WeightedPoint& a, const WeightedPoint& b) { return a.mass < b.mass; });
            res.rho = it->mass;
            res.z_star = {it->x, it->y};
        } else {
            if (pts.size() > 4096)
                throw ValidationError(
                    "small_ball_exact: too many distinct complex sums for the disk sweep "
                    "(>4096); use small_ball_mc");
            auto [mass, center] = best_disk_complex(pts, eps);
            res.rho = mass;
            res.z_star = center;
        }
    }
    res.rho = std::min(res.rho, 1.0);
    return res;
}

SmallBallResult small_ball_mc(const EntryDistribution& dist, std::span<const Cplx> v, double eps,
                              std::int64_t trials, std::uint64_t seed, double confidence) {
    if (trials < 1) throw ValidationError("small_ball_mc: trials must be >= 1");
    if (v.empty()) throw ValidationError("small_ball_mc: empty weight vector");
    if (!(eps >= 0.0)) throw ValidationError("small_ball_mc: eps must be >= 0");

    SmallBallResult res;
    res.v.assign(v.begin(), v.end());
    res.eps = eps;
    res.method = SmallBallMethod::mc;
    res.confidence = confidence;

    if (std::isinf(eps)) {
        res.rho = 1.0;
        res.rho_upper = 1.0;
        return res;
    }

    const bool real_case = dist.is_real() && weights_real(v);
    std::vector<WeightedPoint> pts;
    pts.reserve(static_cast<std::size_t>(trials));
    const double w = 1.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        CounterRng rng(seed, 0x5B417, static_cast<std::uint64_t>(t));
        Cplx sum{0.0, 0.0};
        for (std::size_t j = 0; j < v.size(); ++j) sum += dist.draw(rng) * v[j];
        pts.push_back({sum.real(), sum.imag(), w});
    }

    double best_mass = 0.0;
    Cplx center{0.0, 0.0};
    if (real_case) {
        cluster_real(pts);
        if (eps == 0.0) {
            const auto it = std::max_element(
                pts.begin(), pts.end(),
                [](const WeightedPoint& a, const WeightedPoint& b) { return a.mass < b.mass; });
            best_mass = it->mass;
            center = {it->x, 0.0};
        } else {
            auto [mass, c] = best_window_real(pts, eps);
            best_mass = mass;
            center = {c, 0.0};
        }
    } else {
        cluster_complex(pts);
        if (eps == 0.0) {
            const auto it = std::max_element(
                pts.begin(), pts.end(),
                [](const WeightedPoint& a, const WeightedPoint& b) { return a.mass < b.mass; });
            best_mass = it->mass;
            center = {it->x, it->y};
        } else {
            // Grid of pitch <= eps/4 over the occupied part of the plane;
            // candidate cells are dilations of occupied ones.
            const double pitch = eps / 4.0;
            std::vector<std::pair<std::int64_t, std::int64_t>> occupied;
            for (const auto& p : pts)
                occupied.emplace_back(static_cast<std::int64_t>(std::floor(p.x / pitch)),
                                      static_cast<std::int64_t>(std::floor(p.y / pitch)));
            std::sort(occupied.begin(), occupied.end());
            occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());
            const std::int64_t reach = 4;
            std::vector<std::pair<std::int64_t, std::int64_t>> candidates;
            for (const auto& c : occupied)
                for (std::int64_t dx = -reach; dx <= reach; ++dx)
                    for (std::int64_t dy = -reach; dy <= reach; ++dy)
                        candidates.emplace_back(c.first + dx, c.second + dy);
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            for (const auto& c : candidates) {
                const double cx = (static_cast<double>(c.first) + 0.5) * pitch;
                const double cy = (static_cast<double>(c.second) + 0.5) * pitch;
                const double m = mass_in_disk(pts, cx, cy, eps);
                if (m > best_mass) {
                    best_mass = m;
                    center = {cx, cy};
                }
            }
        }
    }

    const auto hits = static_cast<std::int64_t>(std::llround(best_mass));
    res.rho = best_mass / static_cast<double>(trials);
    res.z_star = center;
    res.rho_upper = clopper_pearson_upper(std::min(hits, trials), trials, confidence);
    return res;
}

LevyNorm levy_norm(const EntryDistribution& dist, Cplx z) {
    auto frac_dist = [](double x) { return std::abs(x - std::round(x)); };
    LevyNorm out;
    out.z = z;
    double acc = 0.0;
    if (dist.is_discrete()) {
        const std::vector<Atom> atoms = dist.atoms();
        for (const auto& a : atoms) {
            for (const auto& b : atoms) {
                const double d = frac_dist((z * (a.value - b.value)).real());
                acc += a.prob * b.prob * d * d;
            }
        }
    } else {
        constexpr std::size_t kPairs = 100'000;
        CounterRng rng(0x11E7ULL, 0x4C45ULL);
        for (std::size_t i = 0; i < kPairs; ++i) {
            const Cplx a = dist.draw(rng);
            const Cplx b = dist.draw(rng);
            const double d = frac_dist((z * (a - b)).real());
            acc += d * d;
        }
        acc /= static_cast<double>(kPairs);
    }
    out.value = std::sqrt(acc);
    return out;
}

CompressibilityVerdict classify_compressible(std::span<const Cplx> v, double a, double b) {
    if (v.empty()) throw ValidationError("classify_compressible: empty vector");
    if (!(a > 0.0) || a > 1.0) throw ValidationError("classify_compressible: need 0 < a <= 1");
    if (!(b >= 0.0)) throw ValidationError("classify_compressible: need b >= 0");
    double norm = 0.0;
    for (const auto& x : v) norm += std::norm(x);
    norm = std::sqrt(norm);
    if (std::abs(norm - 1.0) > 1e-10)
        throw ValidationError("classify_compressible: input must be a unit vector");

    const std::size_t n = v.size();
    const auto keep = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(a * static_cast<double>(n) - 1e-12)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::norm(v[i]) > std::norm(v[j]);
    });

    CompressibilityVerdict verdict;
    verdict.a = a;
    verdict.b = b;
    verdict.support = keep;
    verdict.witness.assign(n, Cplx{0.0, 0.0});
    double tail2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        if (r < keep) {
            verdict.witness[order[r]] = v[order[r]];
        } else {
            tail2 += std::norm(v[order[r]]);
        }
    }
    verdict.distance = std::sqrt(tail2);
    verdict.compressible = verdict.distance <= b + 1e-12;
    return verdict;
}

RichVerdict rich_membership(const EntryDistribution& dist, std::span<const Cplx> v, double eps,
                            double rho, std::int64_t trials, std::uint64_t seed,
                            std::size_t budget) {
    RichVerdict verdict;
    verdict.threshold = rho;
    if (rho <= 0.0) {
        // the supremum of probabilities is always >= 0
        verdict.member = true;
        verdict.certain = true;
        verdict.estimate = 0.0;
        return verdict;
    }
    const double combos =
        dist.is_discrete()
            ? std::pow(static_cast<double>(dist.atoms().size()), static_cast<double>(v.size()))
            : std::numeric_limits<double>::infinity();
    if (dist.is_discrete() && combos <= static_cast<double>(budget)) {
        // exact path is certain (complex eps > 0 may still exceed the disk
        // sweep limit; fall through to Monte Carlo if it refuses)
        try {
            const SmallBallResult exact = small_ball_exact(dist, v, eps, budget);
            verdict.member = exact.rho >= rho * (1.0 - 1e-12);
            verdict.certain = true;
            verdict.estimate = exact.rho;
            verdict.ci_low = exact.rho;
            verdict.ci_high = exact.rho;
            return verdict;
        } catch (const ValidationError&) {
        }
    }
    const SmallBallResult mc = small_ball_mc(dist, v, eps, trials, seed);
    const auto hits = static_cast<std::int64_t>(
        std::llround(mc.rho * static_cast<double>(trials)));
    const BinomialInterval ci = clopper_pearson(hits, trials, 0.95);
    verdict.member = mc.rho >= rho;
    verdict.certain = false;
    verdict.estimate = mc.rho;
    verdict.ci_low = ci.low;
    verdict.ci_high = ci.high;
    return verdict;
}

} // namespace rmt
