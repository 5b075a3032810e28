#include "rmt/constructions.hpp"

#include <cmath>

#include "rmt/errors.hpp"
#include "rmt/spectral.hpp"
#include "rmt/svd.hpp"

namespace rmt {

DenseMatrix adversarial_pattern(std::size_t n, double big_l) {
    if (n < 2) throw ValidationError("adversarial_pattern: need n >= 2");
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m(i + 1, i) = big_l;
        m(i + 1, n - 1) = big_l;
    }
    return m;
}

DenseMatrix adversarial_matrix(std::size_t n, double big_l) {
    if (n % 2 != 0)
        throw ValidationError("adversarial_matrix: n must be even (the construction assumes an "
                              "even-length sign vector can sum to zero)");
    if (n < 4) throw ValidationError("adversarial_matrix: need n >= 4");
    if (!(big_l >= static_cast<double>(n)))
        throw ValidationError("adversarial_matrix: need L >= n");
    return adversarial_pattern(n, big_l);
}

ShiftedEnsemble::ShiftedEnsemble(DenseMatrix shift_matrix, EntryDistribution law)
    : shift(std::move(shift_matrix)), entry_law(std::move(law)), n(shift.rows()) {
    if (shift.rows() != shift.cols())
        throw ValidationError("ShiftedEnsemble: shift must be square");
    if (!shift.all_finite()) throw ValidationError("ShiftedEnsemble: non-finite shift entries");
    if (!entry_law.is_real())
        throw ValidationError("ShiftedEnsemble: spectral ensembles use real entry laws");
}

ShiftedEnsemble ShiftedEnsemble::centered(std::size_t n, EntryDistribution law) {
    return ShiftedEnsemble(DenseMatrix(n, n, 0.0), std::move(law));
}

DenseMatrix sample_noise(const EntryDistribution& law, std::size_t n, std::uint64_t seed) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            CounterRng stream(seed, i, j);
            m(i, j) = law.draw_real(stream);
        }
    }
    return m;
}

DenseMatrix sample_shifted(const ShiftedEnsemble& ensemble, std::uint64_t seed) {
    DenseMatrix m = sample_noise(ensemble.entry_law, ensemble.n, seed);
    for (std::size_t i = 0; i < ensemble.n; ++i)
        for (std::size_t j = 0; j < ensemble.n; ++j) m(i, j) += ensemble.shift(i, j);
    return m;
}

NormalProfile normal_vector_profile(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw ValidationError("normal_vector_profile: square input only");
    const std::size_t n = a.rows();
    if (n < 2) throw ValidationError("normal_vector_profile: need n >= 2");

    DenseMatrix tail(n - 1, n);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tail(i - 1, j) = a(i, j);

    NormalProfile profile;
    profile.v = unit_normal_to_rows(tail);

    // matches the paper-side normalization: last coordinate non-positive
    if (profile.v[n - 1] > 0.0)
        for (auto& x : profile.v) x = -x;

    {
        const HouseholderQr qr(tail.transposed());
        const double floor = 1e-12 * std::max(1.0, qr.max_abs_r_diag());
        std::size_t rank = 0;
        for (double d : qr.r_diag())
            if (std::abs(d) > floor) ++rank;
        profile.degenerate = rank < n - 1;
    }

    const double flat = 1.0 / std::sqrt(static_cast<double>(n));
    profile.deviations.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) profile.deviations[i] = profile.v[i] - flat;
    profile.deviations[n - 1] = profile.v[n - 1] + flat;
    for (double d : profile.deviations)
        profile.max_abs_deviation = std::max(profile.max_abs_deviation, std::abs(d));
    return profile;
}

} // namespace rmt
