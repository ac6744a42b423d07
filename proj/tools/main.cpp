// Command-line surface for the emitter-cavity toolkit: simulation sweeps,
// closed-form evaluations, global fitting, and the reference battery.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cqed/analytics.hpp"
#include "cqed/config.hpp"
#include "cqed/constants.hpp"
#include "cqed/curve_fit.hpp"
#include "cqed/curve_io.hpp"
#include "cqed/errors.hpp"
#include "cqed/global_fit.hpp"
#include "cqed/model.hpp"
#include "cqed/reference.hpp"
#include "cqed/report.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    std::vector<std::string> overrides;
    std::string format = "table";
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment configuration file (JSON)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--threads", args.threads, "worker threads (0 = logical cores)");
    cmd->add_option("--override", args.overrides, "config override, dotted.key=value")
        ->take_all();
    cmd->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"table", "csv"}));
    cmd->add_flag("-v,--verbose", args.verbose, "echo the effective configuration");
}

cqed::ExperimentConfig effective_config(const CommonArgs& args) {
    std::vector<std::string> warnings;
    cqed::ExperimentConfig cfg;
    if (!args.config_path.empty()) {
        cfg = cqed::load_config(args.config_path, /*strict=*/true, &warnings);
    } else {
        cfg = cqed::parse_config("{}", true, &warnings);
    }
    cfg = cqed::apply_overrides(cfg, args.overrides);
    cfg.simulation.threads = args.threads;
    cfg.fit.sim.threads = args.threads;
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    if (args.verbose) std::cerr << cqed::config_to_json(cfg);
    return cfg;
}

void write_json(const ordered_json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw cqed::ConfigError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void print_kv(const std::string& format, const std::vector<std::pair<std::string, double>>& rows) {
    if (format == "csv") {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::cout << fmt(rows[i].second) << (i + 1 < rows.size() ? "," : "");
        }
        std::cout << "\n";
    } else {
        for (const auto& [k, v] : rows) std::cout << k << " = " << fmt(v) << "\n";
    }
}

int run_simulate(const std::string& kind, const CommonArgs& args) {
    const cqed::ExperimentConfig cfg = effective_config(args);
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    ordered_json summary;
    summary["kind"] = kind;
    summary["config_hash"] = cqed::config_hash_hex(cfg);

    if (kind == "decay") {
        const cqed::PulseCycle cycle =
            cqed::simulate_pulse_cycle(cfg.system, cfg.drive, cfg.simulation);
        cqed::write_curve(cycle.decay_trace, (out / "decay_trace.csv").string());
        const cqed::DecayRateFit fit = cqed::extract_decay_rate(
            cycle.decay_trace, cfg.drive.pulse_width_s + cfg.drive.t0_s);
        const double enhancement = fit.rate / cqed::angular(cfg.system.gamma0_hz);
        summary["lifetime_ns"] = 1e9 / fit.rate;
        summary["decay_rate_per_s"] = fit.rate;
        summary["enhancement_over_gamma0"] = enhancement;
        summary["counts_per_pulse"] = cycle.counts_per_pulse;
        print_kv(args.format, {{"lifetime_ns", 1e9 / fit.rate},
                               {"enhancement_over_gamma0", enhancement},
                               {"counts_per_pulse", cycle.counts_per_pulse}});
    } else if (kind == "ple") {
        const std::vector<double> scan = cqed::default_ple_scan(
            cfg.system, cfg.drive, cfg.sweep.scan_points, cfg.sweep.scan_span_linewidths);
        const cqed::SimCurve spec =
            cqed::ple_spectrum(cfg.system, cfg.drive, scan, cfg.simulation);
        cqed::write_curve(spec, (out / "ple_spectrum.csv").string());
        const cqed::GaussianFit fit = cqed::fit_gaussian(spec);
        if (!fit.significant) std::cerr << "warning: spectrum amplitude not significant\n";
        summary["fwhm_hz"] = fit.fwhm;
        summary["center_offset_hz"] = fit.center - cfg.system.omega_a_hz;
        summary["amplitude_counts"] = fit.amplitude;
        summary["significant"] = fit.significant;
        print_kv(args.format, {{"fwhm_ghz", fit.fwhm / 1e9},
                               {"center_offset_ghz", (fit.center - cfg.system.omega_a_hz) / 1e9},
                               {"amplitude_counts", fit.amplitude}});
    } else if (kind == "saturation") {
        const cqed::SimCurve curve = cqed::saturation_curve(cfg.system, cfg.drive,
                                                            cfg.sweep.powers_w, cfg.simulation);
        cqed::write_curve(curve, (out / "saturation.csv").string());
        const double asymptote = curve.y.back();
        double half_power = 0.0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            if (curve.y[i] >= 0.5 * asymptote) {
                const double f = (0.5 * asymptote - curve.y[i - 1]) /
                                 std::max(curve.y[i] - curve.y[i - 1], 1e-300);
                half_power = curve.x[i - 1] + f * (curve.x[i] - curve.x[i - 1]);
                break;
            }
        }
        summary["asymptote_counts_per_pulse"] = asymptote;
        summary["half_saturation_power_w"] = half_power;
        print_kv(args.format, {{"asymptote_counts_per_pulse", asymptote},
                               {"half_saturation_power_nw", half_power * 1e9}});
    } else if (kind == "detuning") {
        const cqed::SimCurve curve = cqed::decay_vs_detuning(
            cfg.system, cfg.drive, cfg.sweep.detunings_hz, cfg.simulation);
        cqed::write_curve(curve, (out / "decay_vs_detuning.csv").string());
        summary["points"] = curve.size();
        if (curve.size() >= 5) {
            const cqed::PurcellLorentzianFit fit = cqed::fit_purcell_lorentzian(curve);
            summary["p_t"] = fit.fit.p_t;
            summary["kappa_tilde_hz"] = fit.fit.kappa_tilde;
            summary["gamma_inf_ratio"] = fit.fit.gamma_inf_ratio;
            summary["r_squared"] = fit.r_squared;
            print_kv(args.format, {{"p_t", fit.fit.p_t},
                                   {"kappa_tilde_ghz", fit.fit.kappa_tilde / 1e9},
                                   {"gamma_inf_ratio", fit.fit.gamma_inf_ratio},
                                   {"r_squared", fit.r_squared}});
        } else {
            print_kv(args.format, {{"enhancement_at_first_point", curve.y.front()}});
        }
    } else if (kind == "map2d") {
        const std::vector<double> scan = cqed::default_ple_scan(
            cfg.system, cfg.drive, cfg.sweep.scan_points, cfg.sweep.scan_span_linewidths);
        const cqed::SpectrumMap map = cqed::spectrum_map_2d(
            cfg.system, cfg.drive, cfg.sweep.detunings_hz, scan, cfg.simulation);
        std::ofstream mv(out / "spectrum_map.csv");
        if (!mv) throw cqed::ConfigError("cannot write spectrum_map.csv");
        mv << "# cqed-map v1: rows = cavity detuning (Hz), columns = laser frequency (Hz)\n";
        mv << "detuning_hz";
        for (double w : map.scan_hz) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", w);
            mv << "," << buf;
        }
        mv << "\n";
        for (std::size_t r = 0; r < map.detunings_hz.size(); ++r) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", map.detunings_hz[r]);
            mv << buf;
            for (std::size_t c = 0; c < map.scan_hz.size(); ++c) {
                std::snprintf(buf, sizeof(buf), "%.17g",
                              map.counts(static_cast<long>(r), static_cast<long>(c)));
                mv << "," << buf;
            }
            mv << "\n";
        }
        double peak = 0.0;
        long peak_row = 0;
        for (long r = 0; r < map.counts.rows(); ++r) {
            for (long c = 0; c < map.counts.cols(); ++c) {
                if (map.counts(r, c) > peak) {
                    peak = map.counts(r, c);
                    peak_row = r;
                }
            }
        }
        summary["rows"] = map.detunings_hz.size();
        summary["columns"] = map.scan_hz.size();
        summary["peak_counts"] = peak;
        summary["peak_detuning_hz"] = map.detunings_hz[static_cast<std::size_t>(peak_row)];
        print_kv(args.format,
                 {{"peak_counts", peak},
                  {"peak_detuning_ghz", map.detunings_hz[static_cast<std::size_t>(peak_row)] / 1e9}});
    }

    write_json(summary, out / "summary.json");
    return 0;
}

int run_fit(const CommonArgs& args, const std::vector<std::string>& dataset_paths,
            double synthetic_noise) {
    const cqed::ExperimentConfig cfg = effective_config(args);
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);

    cqed::GlobalFitConfig gfc;
    gfc.base = cfg.system;
    gfc.drive = cfg.drive;
    gfc.settings = cfg.fit;
    gfc.settings.sim.threads = args.threads;

    cqed::TripleDataset data;
    if (synthetic_noise >= 0.0) {
        data = cqed::synthesize_datasets(cfg.system.g_hz, cfg.system.gamma_d_hz,
                                         cfg.system.gamma_sd_hz, cfg.sweep.powers_w,
                                         cfg.sweep.linewidth_powers_w, cfg.sweep.detunings_hz,
                                         gfc, synthetic_noise, args.seed);
        cqed::write_curve(data.saturation, (out / "synthetic_saturation.csv").string());
        cqed::write_curve(data.linewidth_vs_power, (out / "synthetic_linewidth.csv").string());
        cqed::write_curve(data.decay_vs_detuning, (out / "synthetic_decay.csv").string());
    } else {
        if (dataset_paths.size() != 3) {
            throw cqed::ConfigError(
                "fit needs three dataset files: saturation, linewidth-vs-power, decay-vs-detuning");
        }
        std::vector<std::string> warnings;
        data.saturation = cqed::read_curve(dataset_paths[0], &warnings);
        data.linewidth_vs_power = cqed::read_curve(dataset_paths[1], &warnings);
        data.decay_vs_detuning = cqed::read_curve(dataset_paths[2], &warnings);
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    }

    const cqed::FitResult fit = cqed::global_cqed_fit(data, gfc, args.seed);

    cqed::ReportContext ctx;
    ctx.config_hash = cqed::config_hash_hex(cfg);
    ctx.seed = args.seed;
    ctx.param_names = {"g_hz", "gamma_d_hz", "gamma_sd_hz", "background"};
    ctx.label = "global_cqed_fit";
    cqed::write_fit_report(fit, ctx, (out / "report.json").string());

    const cqed::TripleDataset overlay = cqed::evaluate_model(
        fit.params[0], fit.params[1], fit.params[2], fit.params[3], data, gfc);
    cqed::write_curve(overlay.saturation, (out / "overlay_saturation.csv").string());
    cqed::write_curve(overlay.linewidth_vs_power, (out / "overlay_linewidth.csv").string());
    cqed::write_curve(overlay.decay_vs_detuning, (out / "overlay_decay.csv").string());

    print_kv(args.format, {{"g_mhz", fit.params[0] / 1e6},
                           {"gamma_d_ghz", fit.params[1] / 1e9},
                           {"gamma_sd_ghz", fit.params[2] / 1e9},
                           {"background_counts", fit.params[3]},
                           {"cost", fit.cost},
                           {"n_eval", static_cast<double>(fit.n_eval)}});
    if (!fit.converged) std::cerr << "warning: optimizer stopped on evaluation budget\n";
    return 0;
}

int run_analytic(const std::string& name, const std::vector<double>& a, const std::string& format) {
    using namespace cqed;
    auto need = [&](std::size_t n) {
        if (a.size() != n) {
            throw ConfigError("analytic " + name + " expects " + std::to_string(n) + " arguments");
        }
    };
    if (name == "purcell-lorentzian") {
        need(4);
        print_kv(format, {{"enhancement", purcell_lorentzian(a[0], {a[1], a[2], a[3]})}});
    } else if (name == "rate-decomposition") {
        need(3);
        const RateBudget b = rate_decomposition(a[0], a[1], a[2]);
        print_kv(format, {{"gamma_zpl_hz", b.gamma_zpl},
                          {"gamma_psb_hz", b.gamma_psb},
                          {"gamma_nr_hz", b.gamma_nr}});
    } else if (name == "beta") {
        need(1);
        print_kv(format, {{"beta", beta_factor(a[0])}});
    } else if (name == "zpl-purcell-bound") {
        need(2);
        print_kv(format, {{"p_zpl_min", zpl_purcell_bound(a[0], a[1])}});
    } else if (name == "qe-lower-bound") {
        need(3);
        print_kv(format, {{"eta_qe_min", qe_lower_bound(a[0], a[1], a[2])}});
    } else if (name == "dipole-moment") {
        need(5);
        print_kv(format, {{"d_zpl_cm", dipole_moment(a[0], a[1], a[2], a[3], a[4])}});
    } else if (name == "coupling-from-purcell") {
        need(3);
        print_kv(format, {{"g_hz", coupling_from_sim_purcell(a[0], a[1], a[2])}});
    } else if (name == "system-efficiency") {
        need(4);
        print_kv(format, {{"eta_sys", system_efficiency({a[0], a[1], a[2], a[3]})}});
    } else if (name == "eta-cav-from-reflection") {
        need(1);
        print_kv(format, {{"eta_cav", eta_cav_from_reflection(a[0])}});
    } else if (name == "saturation-counts") {
        need(4);
        print_kv(format, {{"counts_per_pulse", saturation_counts(a[0], a[1], a[2], a[3])}});
    } else if (name == "waveguide-efficiency-bounds") {
        need(8);
        const auto b = waveguide_efficiency_bounds(a[0], a[1], a[2], a[3], a[4], a[5], {a[6], a[7]});
        print_kv(format, {{"eta_wg_lo", b[0]}, {"eta_wg_hi", b[1]}});
    } else if (name == "g2-snr-limit") {
        need(1);
        print_kv(format, {{"g2_zero", g2_snr_limit(a[0])}});
    } else if (name == "zeeman-amplitude") {
        need(3);
        ZeemanModel m;
        m.delta_g = a[1];
        m.linewidth = a[2];
        print_kv(format, {{"relative_amplitude", zeeman_amplitude(a[0], m)}});
    } else if (name == "thermal-linewidth") {
        need(4);
        ThermalModel m;
        m.p0 = a[1];
        m.p_t_coeff = a[2];
        m.e_a = a[3] * constants::electron_volt;
        print_kv(format, {{"linewidth_hz", thermal_linewidth(a[0], m)}});
    } else if (name == "nuclear-separation") {
        need(1);
        const NearestNeighbor nn = nuclear_spin_separation(a[0]);
        print_kv(format, {{"d_nn_nm", nn.d_nn_cm * 1e7}});
    } else if (name == "kappa-tilde") {
        need(2);
        print_kv(format, {{"kappa_tilde_hz", kappa_tilde_approx(a[0], a[1])}});
    } else {
        throw ConfigError("unknown analytic formula: " + name);
    }
    return 0;
}

int run_reproduce(const CommonArgs& args) {
    fs::create_directories(args.out_dir);
    cqed::BatteryOptions opts;
    opts.seed = args.seed;
    opts.threads = args.threads;
    opts.progress = &std::cout;
    const std::vector<cqed::CriterionResult> results = cqed::run_reference_battery(opts);
    cqed::write_battery_report(results, args.seed,
                               (fs::path(args.out_dir) / "report.json").string());
    const bool ok = cqed::all_passed(results);
    std::cout << (ok ? "reference battery: all criteria passed\n"
                     : "reference battery: FAILURES present\n");
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"emitter-cavity simulation and parameter-extraction toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args, fit_args, repro_args;
    std::string sim_kind;
    std::vector<std::string> fit_datasets;
    double fit_synthetic = -1.0;
    std::string analytic_name, analytic_format = "table";
    std::vector<double> analytic_args;

    CLI::App* sim = app.add_subcommand("simulate", "run one simulated experiment");
    sim->add_option("kind", sim_kind, "decay | ple | saturation | detuning | map2d")
        ->required()
        ->check(CLI::IsMember({"decay", "ple", "saturation", "detuning", "map2d"}));
    add_common(sim, sim_args);

    CLI::App* fit = app.add_subcommand("fit", "global fit of (g, Gamma_d, Gamma_sd)");
    fit->add_option("datasets", fit_datasets,
                    "saturation.csv linewidth.csv decay.csv (omit with --synthetic)");
    fit->add_option("--synthetic", fit_synthetic,
                    "generate synthetic datasets with this noise fraction and fit them");
    add_common(fit, fit_args);

    CLI::App* analytic = app.add_subcommand("analytic", "evaluate one closed-form expression");
    analytic->add_option("name", analytic_name, "formula name")->required();
    analytic->add_option("args", analytic_args, "numeric arguments");
    analytic->add_option("--format", analytic_format, "output format")
        ->check(CLI::IsMember({"table", "csv"}));

    CLI::App* repro = app.add_subcommand("reproduce", "run the reference battery");
    add_common(repro, repro_args);

    try {
        app.parse(argc, argv);
        if (sim->parsed()) return run_simulate(sim_kind, sim_args);
        if (fit->parsed()) return run_fit(fit_args, fit_datasets, fit_synthetic);
        if (analytic->parsed()) return run_analytic(analytic_name, analytic_args, analytic_format);
        if (repro->parsed()) return run_reproduce(repro_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    } catch (const cqed::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
}
