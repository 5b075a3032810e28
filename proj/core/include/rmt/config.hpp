#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmt/distributions.hpp"
#include "rmt/small_ball.hpp"

namespace rmt {

enum class ExperimentKind {
    dist_check,
    spectrum,
    tails,
    edelman,
    main_theorem,
    construction,
    smallball,
    norms,
};

const char* experiment_kind_name(ExperimentKind kind);
ExperimentKind experiment_kind_from_name(const std::string& name);

struct ShiftSpec {
    enum class Kind { zero, adversarial, csv };
    Kind kind = Kind::zero;
    double big_l = 0.0;   // adversarial
    std::string path;     // csv
};

struct VectorSpec {
    enum class Kind { flat, spike, values };
    Kind kind = Kind::flat;
    std::size_t n = 0;
    std::size_t k = 1; // spike support
    std::vector<std::complex<double>> values;

    std::vector<std::complex<double>> build() const;
};

struct SmallBallSpec {
    std::string op = "exact"; // exact | mc | fourier | rich | compress
    VectorSpec vector;
    double eps = 0.0;
    double r = 0.1;
    double rho = 0.0;
    double comp_a = 0.5;
    double comp_b = 0.1;
};

// One experiment run, fully parsed. All randomness flows from `seed`;
// a missing seed is a validation error, never a wall-clock default.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::spectrum;
    EntryDistribution distribution = EntryDistribution::gaussian();
    std::size_t n = 0;
    std::vector<std::size_t> n_grid;
    std::vector<double> t_grid;
    std::vector<double> l_grid;
    double gamma = 0.5;
    double a_param = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = ".";
    double esseen_c = kDefaultEsseenC;
    ShiftSpec shift;
    SmallBallSpec smallball;
    double kappa = 0.0; // dist-check: 0 means run the phase/kappa search
    int phase_resolution = 128;
    int threads = 1; // execution detail; excluded from the report echo
};

// Parse a config JSON document. A manifest (an object with a "config"
// member) is unwrapped, so any run-manifest reproduces its run.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Checks every precondition of the target experiment up front and throws
// a ValidationError listing all violations at once.
void validate_config(const ExperimentConfig& config);

} // namespace rmt
