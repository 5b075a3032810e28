#pragma once

#include <cstdint>

#include "rmt/distributions.hpp"
#include "rmt/matrix.hpp"

namespace rmt {

// The adversarial shift: an all-zero first row on top of L*I_{n-1}
// concatenated with an all-L last column. Row i+1 equals L*(e_i + e_n).
// Requires even n >= 4 and L >= n.
DenseMatrix adversarial_matrix(std::size_t n, double big_l);

// Same pattern without the evenness gate, for norm studies of the shift
// alone at arbitrary sizes.
DenseMatrix adversarial_pattern(std::size_t n, double big_l);

struct ShiftedEnsemble {
    DenseMatrix shift;         // the deterministic part
    EntryDistribution entry_law = EntryDistribution::gaussian();
    std::size_t n = 0;

    ShiftedEnsemble(DenseMatrix shift_matrix, EntryDistribution law);
    static ShiftedEnsemble centered(std::size_t n, EntryDistribution law); // zero shift
};

// Draws shift + noise. Entry (i, j) of the noise comes from the
// substream keyed by (seed, i, j), so the same seed reuses identical
// noise across different shifts (paired comparisons).
DenseMatrix sample_shifted(const ShiftedEnsemble& ensemble, std::uint64_t seed);

// Noise-only draw with the same substream convention.
DenseMatrix sample_noise(const EntryDistribution& law, std::size_t n, std::uint64_t seed);

struct NormalProfile {
    std::vector<double> v;      // unit normal of rows 2..n, last coordinate <= 0
    std::vector<double> deviations; // a_i = v_i - (+-1)/sqrt(n)
    double max_abs_deviation = 0.0;
    bool degenerate = false;
};

// Unit normal of the last n-1 rows, written as the flat vector
// (1/sqrt(n), ..., 1/sqrt(n), -1/sqrt(n)) plus coordinate deviations.
NormalProfile normal_vector_profile(const DenseMatrix& a);

} // namespace rmt
