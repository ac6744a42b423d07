#include "cqed/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cqed/errors.hpp"
#include "cqed/report.hpp"

namespace cqed {

using json = nlohmann::ordered_json;

namespace {

struct UnitFamily {
    const char* canonical;
    std::vector<std::pair<const char*, double>> suffixes;  // suffix -> scale to base unit
};

const UnitFamily kFrequency{"hz",
                            {{"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}, {"thz", 1e12}}};
const UnitFamily kTime{"s", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}}};
const UnitFamily kPower{"w", {{"w", 1.0}, {"mw", 1e-3}, {"uw", 1e-6}, {"nw", 1e-9}, {"pw", 1e-12}}};

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// One config section with unit-suffix resolution and unknown-key tracking.
class Section {
public:
    Section(const json* obj, std::string name, bool strict, std::vector<std::string>* warnings)
        : obj_(obj), name_(std::move(name)), strict_(strict), warnings_(warnings) {}

    double unit_field(const std::string& base, const UnitFamily& fam, double def) {
        const auto hit = find_unit_key(base, fam);
        if (!hit) return def;
        return require_number(hit->first) * hit->second;
    }

    std::vector<double> unit_list(const std::string& base, const UnitFamily& fam,
                                  std::vector<double> def) {
        const auto hit = find_unit_key(base, fam);
        if (!hit) return def;
        return require_number_array(hit->first, hit->second);
    }

    std::array<double, 2> unit_pair(const std::string& base, const UnitFamily& fam,
                                    std::array<double, 2> def) {
        const auto hit = find_unit_key(base, fam);
        if (!hit) return def;
        const std::vector<double> v = require_number_array(hit->first, hit->second);
        if (v.size() != 2) fail("field '" + hit->first + "' must hold exactly two values");
        return {v[0], v[1]};
    }

    double number(const std::string& key, double def) {
        if (!obj_ || !obj_->contains(key)) return def;
        consumed_.push_back(key);
        return require_number(key);
    }

    int integer(const std::string& key, int def) {
        if (!obj_ || !obj_->contains(key)) return def;
        consumed_.push_back(key);
        const json& v = (*obj_)[key];
        if (!v.is_number_integer()) fail("field '" + key + "' must be an integer");
        return v.get<int>();
    }

    // Every key must have been consumed; leftovers are unknown keys or
    // unit-suffix mistakes.
    void finish(const std::vector<std::pair<std::string, const UnitFamily*>>& unit_bases) {
        if (!obj_) return;
        for (auto it = obj_->begin(); it != obj_->end(); ++it) {
            const std::string& key = it.key();
            if (std::find(consumed_.begin(), consumed_.end(), key) != consumed_.end()) continue;
            std::string message = "unknown key '" + name_ + "." + key + "'";
            for (const auto& [base, fam] : unit_bases) {
                if (key == base) {
                    message = "field '" + name_ + "." + base + "' requires a unit suffix (e.g. " +
                              base + "_" + fam->canonical + ")";
                    break;
                }
                if (key.rfind(base + "_", 0) == 0) {
                    message = "unknown unit '" + key.substr(base.size() + 1) + "' on field '" +
                              name_ + "." + base + "'";
                    break;
                }
            }
            if (strict_) throw ConfigError(message);
            if (warnings_) warnings_->push_back(message);
        }
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(name_ + ": " + what); }

    std::optional<std::pair<std::string, double>> find_unit_key(const std::string& base,
                                                                const UnitFamily& fam) {
        if (!obj_) return std::nullopt;
        std::optional<std::pair<std::string, double>> hit;
        for (const auto& [suffix, scale] : fam.suffixes) {
            const std::string key = base + "_" + suffix;
            if (obj_->contains(key)) {
                if (hit) fail("field '" + base + "' given in more than one unit");
                hit = {key, scale};
                consumed_.push_back(key);
            }
        }
        return hit;
    }

    double require_number(const std::string& key) const {
        const json& v = (*obj_)[key];
        if (!v.is_number()) fail("field '" + key + "' must be a number");
        return v.get<double>();
    }

    std::vector<double> require_number_array(const std::string& key, double scale) const {
        const json& v = (*obj_)[key];
        if (!v.is_array()) fail("field '" + key + "' must be an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const json& e : v) {
            if (!e.is_number()) fail("field '" + key + "' must be an array of numbers");
            out.push_back(e.get<double>() * scale);
        }
        return out;
    }

    const json* obj_;
    std::string name_;
    bool strict_;
    std::vector<std::string>* warnings_;
    std::vector<std::string> consumed_;
};

const json* section(const json& root, const char* name) {
    if (!root.contains(name)) return nullptr;
    if (!root[name].is_object()) throw ConfigError(std::string("section '") + name + "' must be an object");
    return &root[name];
}

std::vector<double> default_powers_w() {
    return {0.25e-9, 0.5e-9, 1e-9, 2e-9, 4e-9, 8e-9, 17e-9, 34e-9, 68e-9, 120e-9};
}

std::vector<double> default_linewidth_powers_w() {
    return {0.04e-9, 0.3e-9, 1.21e-9, 4e-9, 17e-9, 60e-9};
}

std::vector<double> default_detunings_hz() {
    return {-25e9, -20e9, -15e9, -10e9, -6e9, -3e9, -1.5e9, 0.0,
            1.5e9, 3e9,   6e9,   10e9,  15e9, 20e9, 25e9};
}

void validate_sim_options(const SimOptions& o, const char* where) {
    if (o.fock_levels < 2) throw ConfigError(std::string(where) + ": fock_levels must be >= 2");
    if (o.max_fock_levels < o.fock_levels) {
        throw ConfigError(std::string(where) + ": max_fock_levels must be >= fock_levels");
    }
    if (!(o.dt_record > 0.0)) throw ConfigError(std::string(where) + ": dt_record must be > 0");
    if (o.diffusion_points != 1 && (o.diffusion_points < 3 || o.diffusion_points % 2 == 0)) {
        throw ConfigError(std::string(where) + ": diffusion_points must be odd and >= 3 (or 1)");
    }
    if (!(o.diffusion_span_sigmas > 0.0)) {
        throw ConfigError(std::string(where) + ": diffusion_span_sigmas must be > 0");
    }
    if (!(o.truncation_tol > 0.0)) throw ConfigError(std::string(where) + ": truncation_tol must be > 0");
    if (!(o.window_dt_max > 0.0) || o.window_min_steps < 8) {
        throw ConfigError(std::string(where) + ": invalid collection-window quadrature settings");
    }
}

SimOptions read_sim_options(Section& s, const SimOptions& defaults) {
    SimOptions o = defaults;
    o.fock_levels = s.integer("fock_levels", o.fock_levels);
    o.max_fock_levels = s.integer("max_fock_levels", o.max_fock_levels);
    o.truncation_tol = s.number("truncation_tol", o.truncation_tol);
    o.dt_record = s.unit_field("dt_record", kTime, o.dt_record);
    o.diffusion_points = s.integer("diffusion_points", o.diffusion_points);
    o.diffusion_span_sigmas = s.number("diffusion_span_sigmas", o.diffusion_span_sigmas);
    o.window_dt_max = s.unit_field("window_dt_max", kTime, o.window_dt_max);
    o.window_min_steps = s.integer("window_min_steps", static_cast<int>(o.window_min_steps));
    return o;
}

const std::vector<std::pair<std::string, const UnitFamily*>> kSimUnitBases = {
    {"dt_record", &kTime}, {"window_dt_max", &kTime}};

}  // namespace

SimOptions fit_sim_defaults() {
    SimOptions o;
    o.fock_levels = 3;
    o.diffusion_points = 11;
    o.dt_record = 8e-9;
    o.window_dt_max = 2e-8;
    o.window_min_steps = 300;
    return o;
}

ExperimentConfig parse_config(const std::string& json_text, bool strict,
                              std::vector<std::string>* warnings) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream msg;
        msg << "config parse error at line " << line << ", column " << col << ": " << e.what();
        throw ConfigError(msg.str());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    for (auto it = root.begin(); it != root.end(); ++it) {
        static const char* known[] = {"system", "drive", "efficiency", "simulation", "sweep", "fit"};
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) {
            const std::string message = "unknown section '" + it.key() + "'";
            if (strict) throw ConfigError(message);
            if (warnings) warnings->push_back(message);
        }
    }

    ExperimentConfig cfg;

    {
        Section s(section(root, "system"), "system", strict, warnings);
        cfg.system.g_hz = s.unit_field("g", kFrequency, cfg.system.g_hz);
        cfg.system.kappa_hz = s.unit_field("kappa", kFrequency, cfg.system.kappa_hz);
        cfg.system.gamma0_hz = s.unit_field("gamma0", kFrequency, cfg.system.gamma0_hz);
        cfg.system.gamma_d_hz = s.unit_field("gamma_d", kFrequency, cfg.system.gamma_d_hz);
        cfg.system.gamma_sd_hz = s.unit_field("gamma_sd", kFrequency, cfg.system.gamma_sd_hz);
        cfg.system.omega_a_hz = s.unit_field("omega_a", kFrequency, cfg.system.omega_a_hz);
        cfg.system.eta_cav = s.number("eta_cav", cfg.system.eta_cav);
        cfg.system.delta_ac_hz = s.unit_field("delta_ac", kFrequency, cfg.system.delta_ac_hz);
        s.finish({{"g", &kFrequency},
                  {"kappa", &kFrequency},
                  {"gamma0", &kFrequency},
                  {"gamma_d", &kFrequency},
                  {"gamma_sd", &kFrequency},
                  {"omega_a", &kFrequency},
                  {"delta_ac", &kFrequency}});
    }
    {
        Section s(section(root, "drive"), "drive", strict, warnings);
        cfg.drive.p_in_w = s.unit_field("p_in", kPower, cfg.drive.p_in_w);
        cfg.drive.omega_l_hz = s.unit_field("omega_l", kFrequency,
                                            std::numeric_limits<double>::quiet_NaN());
        cfg.drive.pulse_width_s = s.unit_field("pulse_width", kTime, cfg.drive.pulse_width_s);
        cfg.drive.repetition_period_s =
            s.unit_field("repetition_period", kTime, cfg.drive.repetition_period_s);
        cfg.drive.t0_s = s.unit_field("t0", kTime, cfg.drive.t0_s);
        cfg.drive.eta_sys = s.number("eta_sys", cfg.drive.eta_sys);
        s.finish({{"p_in", &kPower},
                  {"omega_l", &kFrequency},
                  {"pulse_width", &kTime},
                  {"repetition_period", &kTime},
                  {"t0", &kTime}});
        if (std::isnan(cfg.drive.omega_l_hz)) cfg.drive.omega_l_hz = cfg.system.omega_a_hz;
    }
    {
        Section s(section(root, "efficiency"), "efficiency", strict, warnings);
        cfg.efficiency.eta_cav = s.number("eta_cav", cfg.efficiency.eta_cav);
        cfg.efficiency.eta_gc = s.number("eta_gc", cfg.efficiency.eta_gc);
        cfg.efficiency.eta_path = s.number("eta_path", cfg.efficiency.eta_path);
        cfg.efficiency.eta_snspd = s.number("eta_snspd", cfg.efficiency.eta_snspd);
        s.finish({});
        for (double e : {cfg.efficiency.eta_cav, cfg.efficiency.eta_gc, cfg.efficiency.eta_path,
                         cfg.efficiency.eta_snspd}) {
            if (e < 0.0 || e > 1.0) throw ConfigError("efficiency: each stage must lie in [0, 1]");
        }
    }
    {
        Section s(section(root, "simulation"), "simulation", strict, warnings);
        cfg.simulation = read_sim_options(s, SimOptions{});
        s.finish(kSimUnitBases);
        validate_sim_options(cfg.simulation, "simulation");
    }
    {
        Section s(section(root, "sweep"), "sweep", strict, warnings);
        cfg.sweep.powers_w = s.unit_list("powers", kPower, default_powers_w());
        cfg.sweep.linewidth_powers_w =
            s.unit_list("linewidth_powers", kPower, default_linewidth_powers_w());
        cfg.sweep.detunings_hz = s.unit_list("detunings", kFrequency, default_detunings_hz());
        cfg.sweep.scan_points = s.integer("scan_points", cfg.sweep.scan_points);
        cfg.sweep.scan_span_linewidths = s.number("scan_span_linewidths", cfg.sweep.scan_span_linewidths);
        s.finish({{"powers", &kPower}, {"linewidth_powers", &kPower}, {"detunings", &kFrequency}});
        if (cfg.sweep.scan_points < 5) throw ConfigError("sweep: scan_points must be >= 5");
    }
    {
        Section s(section(root, "fit"), "fit", strict, warnings);
        cfg.fit.sim = fit_sim_defaults();
        cfg.fit.g_bounds_hz = s.unit_pair("g_bounds", kFrequency, cfg.fit.g_bounds_hz);
        cfg.fit.gamma_d_bounds_hz = s.unit_pair("gamma_d_bounds", kFrequency, cfg.fit.gamma_d_bounds_hz);
        cfg.fit.gamma_sd_bounds_hz =
            s.unit_pair("gamma_sd_bounds", kFrequency, cfg.fit.gamma_sd_bounds_hz);
        cfg.fit.g_init_hz = s.unit_field("g_init", kFrequency, cfg.fit.g_init_hz);
        cfg.fit.gamma_d_init_hz = s.unit_field("gamma_d_init", kFrequency, cfg.fit.gamma_d_init_hz);
        cfg.fit.gamma_sd_init_hz = s.unit_field("gamma_sd_init", kFrequency, cfg.fit.gamma_sd_init_hz);
        cfg.fit.background_init = s.number("background_init", cfg.fit.background_init);
        cfg.fit.background_bounds[0] = s.number("background_lo", cfg.fit.background_bounds[0]);
        cfg.fit.background_bounds[1] = s.number("background_hi", cfg.fit.background_bounds[1]);
        cfg.fit.weight_saturation = s.number("weight_saturation", cfg.fit.weight_saturation);
        cfg.fit.weight_linewidth = s.number("weight_linewidth", cfg.fit.weight_linewidth);
        cfg.fit.weight_decay = s.number("weight_decay", cfg.fit.weight_decay);
        cfg.fit.hops = s.integer("hops", cfg.fit.hops);
        cfg.fit.step_fraction = s.number("step_fraction", cfg.fit.step_fraction);
        cfg.fit.temperature = s.number("temperature", cfg.fit.temperature);
        cfg.fit.nm_tol = s.number("nm_tol", cfg.fit.nm_tol);
        cfg.fit.nm_max_eval = s.integer("nm_max_eval", cfg.fit.nm_max_eval);
        cfg.fit.linewidth_scan_points = s.integer("linewidth_scan_points", cfg.fit.linewidth_scan_points);
        cfg.fit.linewidth_scan_span = s.number("linewidth_scan_span", cfg.fit.linewidth_scan_span);
        cfg.fit.sim = read_sim_options(s, cfg.fit.sim);
        s.finish({{"g_bounds", &kFrequency},
                  {"gamma_d_bounds", &kFrequency},
                  {"gamma_sd_bounds", &kFrequency},
                  {"g_init", &kFrequency},
                  {"gamma_d_init", &kFrequency},
                  {"gamma_sd_init", &kFrequency},
                  {"dt_record", &kTime},
                  {"window_dt_max", &kTime}});
        validate_sim_options(cfg.fit.sim, "fit");
        if (cfg.fit.hops < 0 || cfg.fit.nm_max_eval < 10) {
            throw ConfigError("fit: hops must be >= 0 and nm_max_eval >= 10");
        }
        for (const auto& b : {cfg.fit.g_bounds_hz, cfg.fit.gamma_d_bounds_hz,
                              cfg.fit.gamma_sd_bounds_hz, cfg.fit.background_bounds}) {
            if (!(b[0] < b[1])) throw ConfigError("fit: bounds must satisfy lo < hi");
        }
    }

    const std::vector<std::string> sys_warnings = cfg.system.validate();
    const std::vector<std::string> drv_warnings = cfg.drive.validate();
    if (warnings) {
        warnings->insert(warnings->end(), sys_warnings.begin(), sys_warnings.end());
        warnings->insert(warnings->end(), drv_warnings.begin(), drv_warnings.end());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path, bool strict,
                             std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), strict, warnings);
}

namespace {

json sim_to_json(const SimOptions& o) {
    json j;
    j["fock_levels"] = o.fock_levels;
    j["max_fock_levels"] = o.max_fock_levels;
    j["truncation_tol"] = o.truncation_tol;
    j["dt_record_s"] = o.dt_record;
    j["diffusion_points"] = o.diffusion_points;
    j["diffusion_span_sigmas"] = o.diffusion_span_sigmas;
    j["window_dt_max_s"] = o.window_dt_max;
    j["window_min_steps"] = static_cast<int>(o.window_min_steps);
    return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    json root;
    json& sys = root["system"];
    sys["g_hz"] = cfg.system.g_hz;
    sys["kappa_hz"] = cfg.system.kappa_hz;
    sys["gamma0_hz"] = cfg.system.gamma0_hz;
    sys["gamma_d_hz"] = cfg.system.gamma_d_hz;
    sys["gamma_sd_hz"] = cfg.system.gamma_sd_hz;
    sys["omega_a_hz"] = cfg.system.omega_a_hz;
    sys["eta_cav"] = cfg.system.eta_cav;
    sys["delta_ac_hz"] = cfg.system.delta_ac_hz;

    json& drv = root["drive"];
    drv["p_in_w"] = cfg.drive.p_in_w;
    drv["omega_l_hz"] = cfg.drive.omega_l_hz;
    drv["pulse_width_s"] = cfg.drive.pulse_width_s;
    drv["repetition_period_s"] = cfg.drive.repetition_period_s;
    drv["t0_s"] = cfg.drive.t0_s;
    drv["eta_sys"] = cfg.drive.eta_sys;

    json& eff = root["efficiency"];
    eff["eta_cav"] = cfg.efficiency.eta_cav;
    eff["eta_gc"] = cfg.efficiency.eta_gc;
    eff["eta_path"] = cfg.efficiency.eta_path;
    eff["eta_snspd"] = cfg.efficiency.eta_snspd;

    root["simulation"] = sim_to_json(cfg.simulation);

    json& sweep = root["sweep"];
    sweep["powers_w"] = cfg.sweep.powers_w;
    sweep["linewidth_powers_w"] = cfg.sweep.linewidth_powers_w;
    sweep["detunings_hz"] = cfg.sweep.detunings_hz;
    sweep["scan_points"] = cfg.sweep.scan_points;
    sweep["scan_span_linewidths"] = cfg.sweep.scan_span_linewidths;

    json& fit = root["fit"];
    fit["g_bounds_hz"] = cfg.fit.g_bounds_hz;
    fit["gamma_d_bounds_hz"] = cfg.fit.gamma_d_bounds_hz;
    fit["gamma_sd_bounds_hz"] = cfg.fit.gamma_sd_bounds_hz;
    fit["g_init_hz"] = cfg.fit.g_init_hz;
    fit["gamma_d_init_hz"] = cfg.fit.gamma_d_init_hz;
    fit["gamma_sd_init_hz"] = cfg.fit.gamma_sd_init_hz;
    fit["background_init"] = cfg.fit.background_init;
    fit["background_lo"] = cfg.fit.background_bounds[0];
    fit["background_hi"] = cfg.fit.background_bounds[1];
    fit["weight_saturation"] = cfg.fit.weight_saturation;
    fit["weight_linewidth"] = cfg.fit.weight_linewidth;
    fit["weight_decay"] = cfg.fit.weight_decay;
    fit["hops"] = cfg.fit.hops;
    fit["step_fraction"] = cfg.fit.step_fraction;
    fit["temperature"] = cfg.fit.temperature;
    fit["nm_tol"] = cfg.fit.nm_tol;
    fit["nm_max_eval"] = cfg.fit.nm_max_eval;
    fit["linewidth_scan_points"] = cfg.fit.linewidth_scan_points;
    fit["linewidth_scan_span"] = cfg.fit.linewidth_scan_span;
    const json fit_sim = sim_to_json(cfg.fit.sim);
    for (auto it = fit_sim.begin(); it != fit_sim.end(); ++it) fit[it.key()] = it.value();

    return root.dump(2) + "\n";
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file: " + path);
    out << config_to_json(cfg);
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& overrides) {
    if (overrides.empty()) return cfg;
    json root = json::parse(config_to_json(cfg));
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override must look like section.key=value: " + ov);
        }
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);

        json* node = &root;
        std::size_t start = 0;
        std::vector<std::string> parts;
        while (start <= path.size()) {
            const std::size_t dot = path.find('.', start);
            parts.push_back(path.substr(start, dot == std::string::npos ? dot : dot - start));
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!node->contains(parts[i])) {
                throw ConfigError("override references unknown key: " + path);
            }
            node = &(*node)[parts[i]];
        }
        const std::string& leaf = parts.back();
        if (!node->is_object() || !node->contains(leaf)) {
            throw ConfigError("override references unknown key: " + path);
        }

        char* end = nullptr;
        const double num = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && *end == '\0') {
            if ((*node)[leaf].is_number_integer() && num == std::floor(num)) {
                (*node)[leaf] = static_cast<long long>(num);
            } else {
                (*node)[leaf] = num;
            }
        } else if (value == "true" || value == "false") {
            (*node)[leaf] = (value == "true");
        } else {
            (*node)[leaf] = value;
        }
    }
    return parse_config(root.dump(), /*strict=*/true, nullptr);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a_hash(config_to_json(cfg)); }

std::string config_hash_hex(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << config_hash(cfg);
    return out.str();
}

}  // namespace cqed
