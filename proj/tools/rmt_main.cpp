// rmt: spectral experiments on shifted random matrices.
//
//   rmt <subcommand> --config <path> [--seed N] [--trials N] [--out DIR] [--threads N]
//   rmt plot --report <path> --kind <tail|scaling|hist|norms|spectrum> [--out DIR]
//
// Exit codes: 0 success, 2 validation, 3 numerical, 4 I/O.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmt/config.hpp"
#include "rmt/errors.hpp"
#include "rmt/run.hpp"
#include "rmt/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::optional<std::string> out;
    std::optional<int> threads;
};

void add_run_subcommand(CLI::App& app, const std::string& name, const std::string& desc,
                        std::vector<std::pair<std::string, CommonFlags>>& requests) {
    CLI::App* sub = app.add_subcommand(name, desc);
    auto flags = std::make_shared<CommonFlags>();
    sub->add_option("--config", flags->config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", flags->seed, "override the config seed");
    sub->add_option("--trials", flags->trials, "override the config trial count");
    sub->add_option("--out", flags->out, "override the output directory");
    sub->add_option("--threads", flags->threads, "worker threads (default: config or 1)");
    sub->callback([&requests, name, flags]() { requests.emplace_back(name, *flags); });
}

void print_error(const char* type, const std::string& what) {
    nlohmann::ordered_json err;
    err["error"]["type"] = type;
    err["error"]["message"] = what;
    std::cerr << err.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-matrix spectral laboratory"};
    app.set_version_flag("--version", std::string(rmt::kVersion));
    app.require_subcommand(1);

    std::vector<std::pair<std::string, CommonFlags>> requests;
    for (const char* name : {"dist-check", "spectrum", "tails", "edelman", "main-theorem",
                             "construction", "smallball", "norms"}) {
        add_run_subcommand(app, name, std::string("run the ") + name + " experiment", requests);
    }

    CLI::App* plot = app.add_subcommand("plot", "emit plot CSVs from a report");
    std::string report_path, plot_kind, plot_out;
    plot->add_option("--report", report_path, "path to report.json")->required();
    plot->add_option("--kind", plot_kind, "tail|scaling|hist|norms|spectrum")->required();
    plot->add_option("--out", plot_out, "output directory (default: alongside the report)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help/--version
        app.exit(e);
        print_error("validation", e.what());
        return 2;
    }

    try {
        if (plot->parsed()) {
            const auto files = rmt::emit_plot_data(report_path, plot_kind, plot_out);
            for (const auto& f : files) std::cout << f << "\n";
            return 0;
        }
        const auto& [name, flags] = requests.front();
        rmt::ExperimentConfig cfg = rmt::load_config_file(flags.config_path);
        // the subcommand wins over whatever the file says
        cfg.kind = rmt::experiment_kind_from_name(name);
        if (flags.seed) {
            cfg.seed = *flags.seed;
            cfg.seed_set = true;
        }
        if (flags.trials) cfg.trials = *flags.trials;
        if (flags.out) cfg.out_dir = *flags.out;
        if (flags.threads) cfg.threads = *flags.threads;
        const std::string report = rmt::run_experiment(cfg);
        std::cout << report << "\n";
        return 0;
    } catch (const rmt::ValidationError& e) {
        print_error("validation", e.what());
        return 2;
    } catch (const rmt::NumericalError& e) {
        print_error("numerical", e.what());
        return 3;
    } catch (const rmt::IoError& e) {
        print_error("io", e.what());
        return 4;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 3;
    }
}
