#include "rmt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmt/errors.hpp"

namespace rmt {

using nlohmann::json;

const char* experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::dist_check: return "dist-check";
        case ExperimentKind::spectrum: return "spectrum";
        case ExperimentKind::tails: return "tails";
        case ExperimentKind::edelman: return "edelman";
        case ExperimentKind::main_theorem: return "main-theorem";
        case ExperimentKind::construction: return "construction";
        case ExperimentKind::smallball: return "smallball";
        case ExperimentKind::norms: return "norms";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::dist_check, ExperimentKind::spectrum, ExperimentKind::tails,
          ExperimentKind::edelman, ExperimentKind::main_theorem, ExperimentKind::construction,
          ExperimentKind::smallball, ExperimentKind::norms}) {
        if (name == experiment_kind_name(k)) return k;
    }
    throw ValidationError("unknown experiment kind: " + name);
}

std::vector<std::complex<double>> VectorSpec::build() const {
    switch (kind) {
        case Kind::flat: {
            if (n == 0) throw ValidationError("vector spec: flat vector needs n >= 1");
            const double x = 1.0 / std::sqrt(static_cast<double>(n));
            return std::vector<std::complex<double>>(n, x);
        }
        case Kind::spike: {
            if (n == 0 || k == 0 || k > n)
                throw ValidationError("vector spec: spike needs 1 <= k <= n");
            std::vector<std::complex<double>> v(n, 0.0);
            const double x = 1.0 / std::sqrt(static_cast<double>(k));
            for (std::size_t i = 0; i < k; ++i) v[i] = x;
            return v;
        }
        case Kind::values:
            if (values.empty()) throw ValidationError("vector spec: empty values");
            return values;
    }
    throw ValidationError("vector spec: bad kind");
}

namespace {

EntryDistribution parse_distribution(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("distribution spec must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    EntryDistribution d = EntryDistribution::gaussian();
    if (kind == "gaussian") {
        d = EntryDistribution::gaussian();
    } else if (kind == "bernoulli") {
        d = EntryDistribution::bernoulli();
    } else if (kind == "zero_pm_one") {
        d = EntryDistribution::zero_pm_one(j.at("p").get<double>());
    } else if (kind == "uniform") {
        d = EntryDistribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    } else if (kind == "truncated_gaussian") {
        d = EntryDistribution::truncated_gaussian(j.at("T").get<double>());
    } else if (kind == "two_point") {
        const std::complex<double> a{j.at("a").get<double>(), j.value("a_im", 0.0)};
        const std::complex<double> b{j.at("b").get<double>(), j.value("b_im", 0.0)};
        d = EntryDistribution::two_point(a, b, j.at("p").get<double>());
    } else {
        throw ValidationError("unsupported distribution kind: " + kind);
    }
    if (j.contains("phase")) d = d.rotated(j.at("phase").get<double>());
    return d;
}

ShiftSpec parse_shift(const json& j) {
    ShiftSpec s;
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") {
        s.kind = ShiftSpec::Kind::zero;
    } else if (kind == "adversarial") {
        s.kind = ShiftSpec::Kind::adversarial;
        s.big_l = j.at("L").get<double>();
    } else if (kind == "csv") {
        s.kind = ShiftSpec::Kind::csv;
        s.path = j.at("path").get<std::string>();
    } else {
        throw ValidationError("unsupported shift kind: " + kind);
    }
    return s;
}

VectorSpec parse_vector(const json& j) {
    VectorSpec v;
    if (j.contains("values")) {
        v.kind = VectorSpec::Kind::values;
        const auto& re = j.at("values");
        std::vector<double> im(re.size(), 0.0);
        if (j.contains("values_im")) {
            const auto& jim = j.at("values_im");
            if (jim.size() != re.size())
                throw ValidationError("vector spec: values_im length mismatch");
            im = jim.get<std::vector<double>>();
        }
        for (std::size_t i = 0; i < re.size(); ++i)
            v.values.emplace_back(re[i].get<double>(), im[i]);
        v.n = v.values.size();
        return v;
    }
    const std::string kind = j.value("kind", "flat");
    if (kind == "flat") {
        v.kind = VectorSpec::Kind::flat;
    } else if (kind == "spike") {
        v.kind = VectorSpec::Kind::spike;
        v.k = j.at("k").get<std::size_t>();
    } else {
        throw ValidationError("unsupported vector kind: " + kind);
    }
    v.n = j.at("n").get<std::size_t>();
    return v;
}

} // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("config")) j = j.at("config"); // manifest unwrap

    ExperimentConfig cfg;
    try {
        if (!j.contains("experiment"))
            throw ValidationError("config needs an \"experiment\" field");
        cfg.kind = experiment_kind_from_name(j.at("experiment").get<std::string>());
        if (j.contains("distribution")) cfg.distribution = parse_distribution(j.at("distribution"));
        cfg.n = j.value("n", std::size_t{0});
        if (j.contains("n_grid")) cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
        if (j.contains("t_grid")) cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
        if (j.contains("L_grid")) cfg.l_grid = j.at("L_grid").get<std::vector<double>>();
        cfg.gamma = j.value("gamma", 0.5);
        cfg.a_param = j.value("A", 0.0);
        cfg.trials = j.value("trials", std::int64_t{0});
        if (j.contains("seed")) {
            cfg.seed = j.at("seed").get<std::uint64_t>();
            cfg.seed_set = true;
        }
        cfg.out_dir = j.value("out", std::string("."));
        cfg.esseen_c = j.value("esseen_c", kDefaultEsseenC);
        if (j.contains("shift")) cfg.shift = parse_shift(j.at("shift"));
        if (j.contains("smallball")) {
            const json& sb = j.at("smallball");
            cfg.smallball.op = sb.value("op", std::string("exact"));
            if (sb.contains("vector")) cfg.smallball.vector = parse_vector(sb.at("vector"));
            cfg.smallball.eps = sb.value("eps", 0.0);
            cfg.smallball.r = sb.value("r", 0.1);
            cfg.smallball.rho = sb.value("rho", 0.0);
            cfg.smallball.comp_a = sb.value("a", 0.5);
            cfg.smallball.comp_b = sb.value("b", 0.1);
        }
        cfg.kappa = j.value("kappa", 0.0);
        cfg.phase_resolution = j.value("phase_resolution", 128);
        cfg.threads = j.value("threads", 1);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> violations;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) violations.push_back(msg);
    };

    require(cfg.seed_set, "seed: required (reproducibility contract; no wall-clock default)");
    require(cfg.threads >= 1, "threads: must be >= 1");

    const bool needs_matrix = cfg.kind == ExperimentKind::spectrum ||
                              cfg.kind == ExperimentKind::tails ||
                              cfg.kind == ExperimentKind::edelman ||
                              cfg.kind == ExperimentKind::main_theorem ||
                              cfg.kind == ExperimentKind::construction;
    if (needs_matrix && cfg.shift.kind != ShiftSpec::Kind::csv)
        require(cfg.n >= 2, "n: must be >= 2");

    switch (cfg.kind) {
        case ExperimentKind::dist_check:
            if (cfg.kappa != 0.0) require(cfg.kappa >= 1.0, "kappa: must be >= 1");
            require(cfg.phase_resolution >= 1, "phase_resolution: must be >= 1");
            break;
        case ExperimentKind::spectrum:
            require(cfg.trials >= 1, "trials: must be >= 1");
            require(cfg.distribution.is_real(), "distribution: spectral ensembles are real");
            break;
        case ExperimentKind::tails:
            require(cfg.trials >= 100, "trials: must be >= 100");
            require(!cfg.t_grid.empty(), "t_grid: must be non-empty");
            require(cfg.distribution.is_real(), "distribution: spectral ensembles are real");
            break;
        case ExperimentKind::edelman:
            require(cfg.trials >= 100, "trials: must be >= 100");
            require(!cfg.t_grid.empty(), "t_grid: must be non-empty");
            break;
        case ExperimentKind::main_theorem:
            require(cfg.trials >= 100, "trials: must be >= 100");
            require(cfg.gamma >= 0.5, "gamma: must be >= 1/2");
            require(cfg.a_param >= 0.0, "A: must be >= 0");
            require(cfg.distribution.is_real(), "distribution: spectral ensembles are real");
            break;
        case ExperimentKind::construction:
            require(cfg.trials >= 1, "trials: must be >= 1");
            require(!cfg.l_grid.empty(), "L_grid: must be non-empty");
            require(cfg.n >= 4 && cfg.n % 2 == 0,
                    "n: the construction needs even n >= 4 (odd sizes are rejected)");
            for (double l : cfg.l_grid)
                require(l >= static_cast<double>(cfg.n), "L_grid: every L must satisfy L >= n");
            break;
        case ExperimentKind::smallball: {
            require(cfg.smallball.eps >= 0.0, "smallball.eps: must be >= 0");
            const std::string& op = cfg.smallball.op;
            require(op == "exact" || op == "mc" || op == "fourier" || op == "rich" ||
                        op == "compress",
                    "smallball.op: one of exact|mc|fourier|rich|compress");
            if (op == "exact")
                require(cfg.distribution.is_discrete(),
                        "smallball.op=exact: needs a discrete law (use mc)");
            if (op == "mc" || op == "rich") require(cfg.trials >= 1, "trials: must be >= 1");
            if (op == "fourier") {
                require(cfg.smallball.r > 0.0, "smallball.r: must be > 0");
                require(cfg.esseen_c > 0.0, "esseen_c: must be > 0");
            }
            if (op == "compress") {
                require(cfg.smallball.comp_a > 0.0 && cfg.smallball.comp_a <= 1.0,
                        "smallball.a: must be in (0, 1]");
                require(cfg.smallball.comp_b >= 0.0, "smallball.b: must be >= 0");
            }
            try {
                (void)cfg.smallball.vector.build();
            } catch (const ValidationError& e) {
                violations.push_back(e.what());
            }
            break;
        }
        case ExperimentKind::norms:
            require(cfg.trials >= 1, "trials: must be >= 1");
            require(!cfg.n_grid.empty(), "n_grid: must be non-empty");
            require(std::abs(cfg.distribution.mean()) <= 1e-12 &&
                        std::abs(cfg.distribution.variance() - 1.0) <= 1e-12,
                    "distribution: norm survey needs mean zero, variance one");
            break;
    }

    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw ValidationError(msg);
    }
}

} // namespace rmt
