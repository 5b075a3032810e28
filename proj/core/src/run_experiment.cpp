#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "rmt/errors.hpp"
#include "rmt/experiments.hpp"
#include "rmt/run.hpp"
#include "rmt/small_ball.hpp"
#include "rmt/version.hpp"

namespace rmt {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json echo_distribution(const EntryDistribution& d) {
    ordered_json j;
    switch (d.kind()) {
        case DistKind::gaussian: j["kind"] = "gaussian"; break;
        case DistKind::bernoulli: j["kind"] = "bernoulli"; break;
        case DistKind::zero_pm_one:
            j["kind"] = "zero_pm_one";
            j["p"] = d.param_p();
            break;
        case DistKind::uniform:
            j["kind"] = "uniform";
            j["lo"] = d.param_lo();
            j["hi"] = d.param_hi();
            break;
        case DistKind::truncated_gaussian:
            j["kind"] = "truncated_gaussian";
            j["T"] = d.param_t();
            break;
        case DistKind::two_point:
            j["kind"] = "two_point";
            j["a"] = d.param_a().real();
            if (d.param_a().imag() != 0.0) j["a_im"] = d.param_a().imag();
            j["b"] = d.param_b().real();
            if (d.param_b().imag() != 0.0) j["b_im"] = d.param_b().imag();
            j["p"] = d.param_p();
            break;
    }
    if (d.phase() != 0.0) j["phase"] = d.phase();
    return j;
}

ordered_json echo_shift(const ShiftSpec& s) {
    ordered_json j;
    switch (s.kind) {
        case ShiftSpec::Kind::zero: j["kind"] = "zero"; break;
        case ShiftSpec::Kind::adversarial:
            j["kind"] = "adversarial";
            j["L"] = s.big_l;
            break;
        case ShiftSpec::Kind::csv:
            j["kind"] = "csv";
            j["path"] = s.path;
            break;
    }
    return j;
}

ordered_json echo_vector(const VectorSpec& v) {
    ordered_json j;
    switch (v.kind) {
        case VectorSpec::Kind::flat:
            j["kind"] = "flat";
            j["n"] = v.n;
            break;
        case VectorSpec::Kind::spike:
            j["kind"] = "spike";
            j["n"] = v.n;
            j["k"] = v.k;
            break;
        case VectorSpec::Kind::values: {
            std::vector<double> re, im;
            bool any_im = false;
            for (const auto& x : v.values) {
                re.push_back(x.real());
                im.push_back(x.imag());
                any_im = any_im || x.imag() != 0.0;
            }
            j["values"] = re;
            if (any_im) j["values_im"] = im;
            break;
        }
    }
    return j;
}

ordered_json echo_config(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = experiment_kind_name(cfg.kind);
    j["distribution"] = echo_distribution(cfg.distribution);
    if (cfg.n > 0) j["n"] = cfg.n;
    if (!cfg.n_grid.empty()) j["n_grid"] = cfg.n_grid;
    if (!cfg.t_grid.empty()) j["t_grid"] = cfg.t_grid;
    if (!cfg.l_grid.empty()) j["L_grid"] = cfg.l_grid;
    if (cfg.kind == ExperimentKind::main_theorem) {
        j["gamma"] = cfg.gamma;
        j["A"] = cfg.a_param;
    }
    if (cfg.trials > 0) j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_dir;
    if (cfg.kind == ExperimentKind::smallball) {
        ordered_json sb;
        sb["op"] = cfg.smallball.op;
        sb["vector"] = echo_vector(cfg.smallball.vector);
        sb["eps"] = cfg.smallball.eps;
        sb["r"] = cfg.smallball.r;
        sb["rho"] = cfg.smallball.rho;
        sb["a"] = cfg.smallball.comp_a;
        sb["b"] = cfg.smallball.comp_b;
        j["smallball"] = sb;
        j["esseen_c"] = cfg.esseen_c;
    }
    if (cfg.kind != ExperimentKind::dist_check && cfg.kind != ExperimentKind::smallball &&
        cfg.kind != ExperimentKind::norms)
        j["shift"] = echo_shift(cfg.shift);
    if (cfg.kind == ExperimentKind::dist_check) {
        if (cfg.kappa != 0.0) j["kappa"] = cfg.kappa;
        j["phase_resolution"] = cfg.phase_resolution;
    }
    return j;
}

ordered_json tail_estimate_json(const TailEstimate& est) {
    ordered_json j;
    j["t"] = est.threshold;
    j["trials"] = est.trials;
    j["hits"] = est.hits;
    j["p_hat"] = est.p_hat;
    j["ci_low"] = est.ci_low;
    j["ci_high"] = est.ci_high;
    return j;
}

DenseMatrix build_shift(const ExperimentConfig& cfg) {
    switch (cfg.shift.kind) {
        case ShiftSpec::Kind::zero: return DenseMatrix(cfg.n, cfg.n, 0.0);
        case ShiftSpec::Kind::adversarial: return adversarial_matrix(cfg.n, cfg.shift.big_l);
        case ShiftSpec::Kind::csv: return read_matrix_csv(cfg.shift.path);
    }
    throw ValidationError("bad shift spec");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

struct CsvWriter {
    std::string buf;
    void header(const std::string& h) { buf += h + "\n"; }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            buf += cells[i] + (i + 1 == cells.size() ? "\n" : ",");
    }
};

ordered_json smallball_result_json(const SmallBallResult& r) {
    ordered_json j;
    switch (r.method) {
        case SmallBallMethod::exact: j["method"] = "exact"; break;
        case SmallBallMethod::mc: j["method"] = "mc"; break;
        case SmallBallMethod::fourier_bound: j["method"] = "fourier_bound"; break;
    }
    j["eps"] = finite_or_null(r.eps);
    j["rho"] = r.rho;
    j["z_star"] = {r.z_star.real(), r.z_star.imag()};
    if (r.method == SmallBallMethod::mc) {
        j["rho_upper"] = r.rho_upper;
        j["confidence"] = r.confidence;
    }
    if (r.method == SmallBallMethod::fourier_bound) {
        j["raw_bound"] = r.raw_bound;
        j["surrogate"] = r.surrogate;
        j["clamped"] = r.clamped;
    }
    return j;
}

ordered_json kappa_report_json(const KappaReport& rep) {
    ordered_json j;
    j["kappa"] = rep.kappa;
    j["passed"] = rep.passed;
    j["min_ratio"] = rep.min_ratio;
    j["margin"] = rep.margin;
    j["second_moment"] = rep.second_moment;
    j["worst_z"] = {rep.worst_z.real(), rep.worst_z.imag()};
    j["worst_w"] = {rep.worst_w.real(), rep.worst_w.imag()};
    j["exact"] = rep.exact;
    return j;
}

} // namespace

std::string run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    std::filesystem::path out_dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());

    ordered_json results;
    std::vector<std::pair<std::string, std::string>> csv_files; // name -> content

    switch (cfg.kind) {
        case ExperimentKind::dist_check: {
            const EntryDistribution& d = cfg.distribution;
            results["name"] = d.name();
            results["declared_mean"] = {d.mean().real(), d.mean().imag()};
            results["declared_variance"] = d.variance();
            if (d.is_real()) {
                constexpr std::size_t kAudit = 1'000'000;
                const std::vector<double> xs =
                    sample(d, CounterRng::derive_key(cfg.seed, 0xD15CULL), kAudit);
                double mean = 0.0;
                for (double x : xs) mean += x;
                mean /= static_cast<double>(xs.size());
                double var = 0.0;
                for (double x : xs) var += (x - mean) * (x - mean);
                var /= static_cast<double>(xs.size() - 1);
                const double bound =
                    4.0 * std::sqrt(d.variance()) / std::sqrt(static_cast<double>(kAudit));
                ordered_json m;
                m["samples"] = kAudit;
                m["sample_mean"] = mean;
                m["sample_variance"] = var;
                m["mean_abs_error"] = std::abs(mean - d.mean().real());
                m["mean_error_bound_4sigma"] = bound;
                m["mean_within_bound"] = std::abs(mean - d.mean().real()) <= bound;
                results["moments"] = m;
            }
            if (cfg.kappa >= 1.0) {
                results["kappa_control"] = kappa_report_json(check_kappa_control(d, cfg.kappa));
            } else {
                const PhaseSearchResult ps = find_controlling_phase(d, cfg.phase_resolution);
                ordered_json p;
                p["theta"] = ps.theta;
                p["kappa"] = ps.kappa;
                p["report"] = kappa_report_json(ps.report);
                results["phase_search"] = p;
            }
            break;
        }
        case ExperimentKind::spectrum: {
            const ShiftedEnsemble ensemble(build_shift(cfg), cfg.distribution);
            const SpectrumReport rep =
                spectrum_survey(ensemble, cfg.trials, cfg.seed, cfg.threads);
            results["n"] = rep.n;
            ordered_json rows = ordered_json::array();
            CsvWriter csv;
            csv.header("trial,s1,sn,kappa,log_kappa,kappa_infinite");
            for (std::size_t t = 0; t < rep.summaries.size(); ++t) {
                const SpectralSummary& s = rep.summaries[t];
                ordered_json r;
                r["trial"] = t;
                r["s1"] = s.s1;
                r["sn"] = s.sn;
                r["kappa"] = finite_or_null(s.kappa);
                r["log_kappa"] = finite_or_null(s.log_kappa);
                r["kappa_infinite"] = s.kappa_infinite;
                rows.push_back(r);
                csv.row({std::to_string(t), csv_num(s.s1), csv_num(s.sn),
                         s.kappa_infinite ? "inf" : csv_num(s.kappa),
                         s.kappa_infinite ? "inf" : csv_num(s.log_kappa),
                         s.kappa_infinite ? "1" : "0"});
            }
            results["rows"] = rows;
            csv_files.emplace_back("spectrum.csv", csv.buf);
            break;
        }
        case ExperimentKind::tails:
        case ExperimentKind::edelman: {
            const bool is_edelman = cfg.kind == ExperimentKind::edelman;
            EdelmanReport erep;
            TailCurve curve;
            if (is_edelman) {
                erep = edelman_check(cfg.n, cfg.t_grid, cfg.trials, cfg.seed, cfg.threads);
                curve = erep.curve;
            } else {
                const ShiftedEnsemble ensemble(build_shift(cfg), cfg.distribution);
                curve = tail_curve(ensemble, cfg.t_grid, cfg.trials, cfg.seed, cfg.threads);
            }
            results["n"] = curve.n;
            ordered_json table = ordered_json::array();
            CsvWriter csv;
            csv.header("n,t,trials,hits,p_hat,ci_low,ci_high,bound_value,verdict");
            bool all_pass = true;
            for (std::size_t i = 0; i < curve.estimates.size(); ++i) {
                const TailEstimate& est = curve.estimates[i];
                ordered_json row = tail_estimate_json(est);
                std::string bound_cell, verdict_cell;
                if (is_edelman) {
                    row["bound"] = erep.bound_values[i];
                    row["verdict"] = static_cast<bool>(erep.verdicts[i]);
                    all_pass = all_pass && erep.verdicts[i];
                    bound_cell = csv_num(erep.bound_values[i]);
                    verdict_cell = erep.verdicts[i] ? "1" : "0";
                }
                table.push_back(row);
                csv.row({std::to_string(curve.n), csv_num(est.threshold),
                         std::to_string(est.trials), std::to_string(est.hits),
                         csv_num(est.p_hat), csv_num(est.ci_low), csv_num(est.ci_high),
                         bound_cell, verdict_cell});
            }
            results["table"] = table;
            if (is_edelman) results["all_verdicts_pass"] = all_pass;
            // slope diagnostics over the largest two decades above the
            // Monte Carlo floor
            try {
                const double floor = 50.0 / static_cast<double>(cfg.trials);
                results["loglog_slope"] = loglog_slope_largest_decades(curve, floor);
                results["slope_p_hat_floor"] = floor;
            } catch (const NumericalError&) {
                results["loglog_slope"] = nullptr;
            }
            csv_files.emplace_back("tail.csv", csv.buf);
            break;
        }
        case ExperimentKind::main_theorem: {
            const MainTheoremReport rep =
                main_theorem_check(build_shift(cfg), cfg.distribution, cfg.gamma, cfg.a_param,
                                   cfg.trials, cfg.seed, cfg.threads);
            results["n"] = rep.n;
            results["gamma"] = rep.gamma;
            results["A"] = rep.a_param;
            results["shift_norm"] = rep.shift_norm;
            results["sn_threshold"] = rep.sn_threshold;
            results["norm_threshold"] = rep.norm_threshold;
            results["kappa_threshold"] = rep.kappa_threshold;
            results["sn_tail"] = tail_estimate_json(rep.sn_tail);
            results["noise_norm_tail"] = tail_estimate_json(rep.norm_tail);
            results["kappa_tail"] = tail_estimate_json(rep.kappa_tail);
            results["non_informative"] = rep.non_informative;
            CsvWriter csv;
            csv.header("quantity,threshold,trials,hits,p_hat,ci_low,ci_high");
            auto row = [&](const char* name, const TailEstimate& e) {
                csv.row({name, csv_num(e.threshold), std::to_string(e.trials),
                         std::to_string(e.hits), csv_num(e.p_hat), csv_num(e.ci_low),
                         csv_num(e.ci_high)});
            };
            row("sn_below", rep.sn_tail);
            row("noise_norm_above", rep.norm_tail);
            row("kappa_above", rep.kappa_tail);
            csv_files.emplace_back("maintheorem.csv", csv.buf);
            break;
        }
        case ExperimentKind::construction: {
            const ConstructionReport rep =
                construction_check(cfg.n, cfg.l_grid, cfg.trials, cfg.seed, cfg.threads);
            results["n"] = rep.n;
            ordered_json rows = ordered_json::array();
            CsvWriter csv;
            csv.header(
                "L,trials,event_hits,event_freq,event_expected,event_consistent,"
                "median_sn_all,median_sn_event,median_mnv_event,mnv_scaling_const,shift_norm");
            for (const ConstructionRow& r : rep.rows) {
                ordered_json jr;
                jr["L"] = r.shift_scale;
                jr["trials"] = r.trials;
                jr["event_hits"] = r.event_hits;
                jr["event_freq"] = r.event_freq;
                jr["event_expected"] = r.event_expected;
                jr["event_consistent"] = r.event_consistent;
                jr["median_sn_all"] = r.median_sn_all;
                jr["median_sn_event"] = r.median_sn_event;
                jr["median_mnv_event"] = r.median_mnv_event;
                jr["mnv_scaling_const"] = r.mnv_scaling_const;
                jr["shift_norm"] = r.shift_norm;
                jr["shift_norm_over_L"] = r.shift_norm / r.shift_scale;
                jr["predicted_scale"] = static_cast<double>(rep.n) / r.shift_scale;
                jr["sn_deciles"] = r.sn_deciles;
                jr["sn_histogram_edges"] = r.sn_histogram_edges;
                jr["sn_histogram_counts"] = r.sn_histogram_counts;
                rows.push_back(jr);
                csv.row({csv_num(r.shift_scale), std::to_string(r.trials),
                         std::to_string(r.event_hits), csv_num(r.event_freq),
                         csv_num(r.event_expected), r.event_consistent ? "1" : "0",
                         csv_num(r.median_sn_all), csv_num(r.median_sn_event),
                         csv_num(r.median_mnv_event), csv_num(r.mnv_scaling_const),
                         csv_num(r.shift_norm)});
            }
            results["rows"] = rows;
            results["scaling_ratios"] = rep.scaling_ratios;
            csv_files.emplace_back("construction.csv", csv.buf);
            CsvWriter scaling;
            scaling.header("L_num,L_den,event_median_ratio");
            for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
                scaling.row({csv_num(rep.rows[i].shift_scale),
                             csv_num(rep.rows[i + 1].shift_scale),
                             csv_num(rep.scaling_ratios[i])});
            csv_files.emplace_back("scaling.csv", scaling.buf);
            break;
        }
        case ExperimentKind::smallball: {
            const std::vector<std::complex<double>> v = cfg.smallball.vector.build();
            ordered_json rows = ordered_json::array();
            CsvWriter csv;
            csv.header("op,eps_or_r,rho,z_re,z_im,extra");
            const std::string& op = cfg.smallball.op;
            if (op == "exact") {
                const SmallBallResult r = small_ball_exact(cfg.distribution, v, cfg.smallball.eps);
                rows.push_back(smallball_result_json(r));
                csv.row({"exact", csv_num(r.eps), csv_num(r.rho), csv_num(r.z_star.real()),
                         csv_num(r.z_star.imag()), ""});
            } else if (op == "mc") {
                const SmallBallResult r =
                    small_ball_mc(cfg.distribution, v, cfg.smallball.eps, cfg.trials, cfg.seed);
                rows.push_back(smallball_result_json(r));
                csv.row({"mc", csv_num(r.eps), csv_num(r.rho), csv_num(r.z_star.real()),
                         csv_num(r.z_star.imag()), "rho_upper=" + csv_num(r.rho_upper)});
            } else if (op == "fourier") {
                const SmallBallResult r =
                    fourier_upper_bound(cfg.distribution, v, cfg.smallball.r, cfg.esseen_c);
                rows.push_back(smallball_result_json(r));
                csv.row({"fourier", csv_num(cfg.smallball.r), csv_num(r.rho), "", "",
                         "surrogate=" + csv_num(r.surrogate)});
            } else if (op == "rich") {
                const RichVerdict verdict =
                    rich_membership(cfg.distribution, v, cfg.smallball.eps, cfg.smallball.rho,
                                    cfg.trials, cfg.seed);
                ordered_json j;
                j["member"] = verdict.member;
                j["certain"] = verdict.certain;
                j["estimate"] = verdict.estimate;
                j["ci_low"] = verdict.ci_low;
                j["ci_high"] = verdict.ci_high;
                j["threshold"] = verdict.threshold;
                rows.push_back(j);
                csv.row({"rich", csv_num(cfg.smallball.eps), csv_num(verdict.estimate), "", "",
                         std::string("member=") + (verdict.member ? "1" : "0")});
            } else { // compress
                const CompressibilityVerdict verdict =
                    classify_compressible(v, cfg.smallball.comp_a, cfg.smallball.comp_b);
                ordered_json j;
                j["a"] = verdict.a;
                j["b"] = verdict.b;
                j["compressible"] = verdict.compressible;
                j["distance"] = verdict.distance;
                j["support"] = verdict.support;
                rows.push_back(j);
                csv.row({"compress", csv_num(verdict.a), csv_num(verdict.distance), "", "",
                         std::string("compressible=") + (verdict.compressible ? "1" : "0")});
            }
            results["rows"] = rows;
            csv_files.emplace_back("smallball.csv", csv.buf);
            break;
        }
        case ExperimentKind::norms: {
            const NormSurveyReport rep =
                norm_survey(cfg.distribution, cfg.n_grid, cfg.trials, cfg.seed, cfg.threads);
            ordered_json rows = ordered_json::array();
            CsvWriter csv;
            csv.header(
                "n,trials,mean_norm,mean_norm_over_sqrt_n,max_norm_over_sqrt_n,row_col_bound,"
                "norm_to_bound_ratio,mean_frobenius,norm_le_frobenius");
            for (const NormSurveyRow& r : rep.rows) {
                ordered_json jr;
                jr["n"] = r.n;
                jr["trials"] = r.trials;
                jr["mean_norm"] = r.mean_norm;
                jr["mean_norm_over_sqrt_n"] = r.mean_norm_over_sqrt_n;
                jr["max_norm_over_sqrt_n"] = r.max_norm_over_sqrt_n;
                jr["row_col_bound"] = r.row_col_bound;
                jr["norm_to_bound_ratio"] = r.norm_to_bound_ratio;
                jr["mean_frobenius"] = r.mean_frobenius;
                jr["norm_le_frobenius"] = r.norm_le_frobenius;
                rows.push_back(jr);
                csv.row({std::to_string(r.n), std::to_string(r.trials), csv_num(r.mean_norm),
                         csv_num(r.mean_norm_over_sqrt_n), csv_num(r.max_norm_over_sqrt_n),
                         csv_num(r.row_col_bound), csv_num(r.norm_to_bound_ratio),
                         csv_num(r.mean_frobenius), r.norm_le_frobenius ? "1" : "0"});
            }
            results["rows"] = rows;
            csv_files.emplace_back("norms.csv", csv.buf);
            break;
        }
    }

    ordered_json report;
    report["config"] = echo_config(cfg);
    report["results"] = results;
    const std::filesystem::path report_path = out_dir / "report.json";
    write_text(report_path, report.dump(2) + "\n");
    for (const auto& [name, content] : csv_files) write_text(out_dir / name, content);

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["threads"] = cfg.threads;
    manifest["wall_clock_seconds"] = elapsed.count();
    manifest["config"] = echo_config(cfg);
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

    return report_path.string();
}

std::vector<std::string> emit_plot_data(const std::string& report_path, const std::string& kind,
                                        const std::string& out_dir) {
    std::ifstream in(report_path);
    if (!in) throw IoError("cannot open report file: " + report_path);
    ordered_json report;
    try {
        in >> report;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("report does not parse as JSON: " + std::string(e.what()));
    }
    const std::filesystem::path dir =
        out_dir.empty() ? std::filesystem::path(report_path).parent_path()
                        : std::filesystem::path(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create plot directory: " + dir.string());

    const auto& results = report.at("results");
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const std::filesystem::path p = dir / name;
        write_text(p, content);
        written.push_back(p.string());
    };

    if (kind == "tail") {
        if (!results.contains("table"))
            throw ValidationError("plot kind 'tail' needs a tails/edelman report");
        CsvWriter csv;
        const bool has_bound = !results.at("table").empty() &&
                               results.at("table").front().contains("bound");
        csv.header(has_bound ? "t,p_hat,ci_low,ci_high,bound" : "t,p_hat,ci_low,ci_high");
        for (const auto& row : results.at("table")) {
            std::vector<std::string> cells = {
                csv_num(row.at("t").get<double>()), csv_num(row.at("p_hat").get<double>()),
                csv_num(row.at("ci_low").get<double>()),
                csv_num(row.at("ci_high").get<double>())};
            if (has_bound) cells.push_back(csv_num(row.at("bound").get<double>()));
            csv.row(cells);
        }
        emit("plot_tail.csv", csv.buf);
    } else if (kind == "scaling") {
        if (!results.contains("rows") || !results.contains("scaling_ratios"))
            throw ValidationError("plot kind 'scaling' needs a construction report");
        CsvWriter csv;
        csv.header("L,median_sn_event,median_sn_all,predicted_scale");
        for (const auto& row : results.at("rows"))
            csv.row({csv_num(row.at("L").get<double>()),
                     csv_num(row.at("median_sn_event").get<double>()),
                     csv_num(row.at("median_sn_all").get<double>()),
                     csv_num(row.at("predicted_scale").get<double>())});
        emit("plot_scaling.csv", csv.buf);
    } else if (kind == "hist") {
        if (!results.contains("rows"))
            throw ValidationError("plot kind 'hist' needs a construction report");
        for (const auto& row : results.at("rows")) {
            if (!row.contains("sn_histogram_edges")) continue;
            CsvWriter csv;
            csv.header("bin_lo,bin_hi,count");
            const auto& edges = row.at("sn_histogram_edges");
            const auto& counts = row.at("sn_histogram_counts");
            for (std::size_t b = 0; b < counts.size(); ++b)
                csv.row({csv_num(edges[b].get<double>()), csv_num(edges[b + 1].get<double>()),
                         std::to_string(counts[b].get<std::int64_t>())});
            emit("plot_hist_L" + csv_num(row.at("L").get<double>()) + ".csv", csv.buf);
        }
    } else if (kind == "norms") {
        if (!results.contains("rows"))
            throw ValidationError("plot kind 'norms' needs a norms report");
        CsvWriter csv;
        csv.header("n,mean_norm_over_sqrt_n,max_norm_over_sqrt_n,norm_to_bound_ratio");
        for (const auto& row : results.at("rows"))
            csv.row({std::to_string(row.at("n").get<std::size_t>()),
                     csv_num(row.at("mean_norm_over_sqrt_n").get<double>()),
                     csv_num(row.at("max_norm_over_sqrt_n").get<double>()),
                     csv_num(row.at("norm_to_bound_ratio").get<double>())});
        emit("plot_norms.csv", csv.buf);
    } else if (kind == "spectrum") {
        if (!results.contains("rows"))
            throw ValidationError("plot kind 'spectrum' needs a spectrum report");
        CsvWriter csv;
        csv.header("trial,s1,sn,log_kappa");
        for (const auto& row : results.at("rows")) {
            const auto& lk = row.at("log_kappa");
            csv.row({std::to_string(row.at("trial").get<std::size_t>()),
                     csv_num(row.at("s1").get<double>()), csv_num(row.at("sn").get<double>()),
                     lk.is_null() ? "inf" : csv_num(lk.get<double>())});
        }
        emit("plot_spectrum.csv", csv.buf);
    } else {
        throw ValidationError("unknown plot kind: " + kind +
                              " (expected tail|scaling|hist|norms|spectrum)");
    }
    return written;
}

} // namespace rmt
