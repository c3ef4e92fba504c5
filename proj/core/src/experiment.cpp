#include "zeris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zeris/cascade.hpp"
#include "zeris/errors.hpp"

namespace zeris::experiment {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "preset", "scenario", "deployment", "scheme", "n_elements", "tau", "split_ratio",
        "bits", "carrier_frequency_hz", "transmit_power_w", "tx_gain_db", "rx_gain_db",
        "noise_power_dbw", "conversion_efficiency", "pin_diode_power_w", "controller_power_w",
        "block_duration_s", "rate_threshold", "nakagami_m", "nakagami_omega", "kappa",
        "rice_k", "d1_m", "d2_m", "pathloss_exponent_los", "pathloss_exponent_fading",
        "truncation_L", "grid_start", "grid_stop", "grid_points", "trials", "seed", "mode",
        "output", "format", "outage_target",
    };
    return keys;
}

// Resolves typed values out of the raw key/value map, recording every
// default taken; leftover keys are reported as unknown.
class Resolver {
public:
    Resolver(std::map<std::string, std::string> kv, std::vector<std::string>* provenance)
        : kv_(std::move(kv)), provenance_(provenance) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string take_string(const std::string& key, const std::string& fallback) {
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            note_default(key, fallback);
            return fallback;
        }
        std::string v = it->second;
        kv_.erase(it);
        return v;
    }

    std::string take_required(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            throw config_error(key, "missing required key '" + key + "'");
        }
        std::string v = it->second;
        kv_.erase(it);
        return v;
    }

    double take_double(const std::string& key, double fallback) {
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            note_default(key, fmt_double(fallback));
            return fallback;
        }
        const double v = parse_double(key, it->second);
        kv_.erase(it);
        return v;
    }

    long long take_int(const std::string& key, long long fallback) {
        auto it = kv_.find(key);
        if (it == kv_.end()) {
            note_default(key, std::to_string(fallback));
            return fallback;
        }
        const double v = parse_double(key, it->second);
        const double r = std::round(v);
        if (std::fabs(v - r) > 1e-9 * std::max(1.0, std::fabs(v))) {
            throw config_error(key, "'" + key + "' must be an integer");
        }
        kv_.erase(it);
        return static_cast<long long>(r);
    }

    static double parse_double(const std::string& key, const std::string& text) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (trim(text.substr(pos)).empty()) return v;
        } catch (const std::exception&) {
        }
        throw config_error(key, "'" + key + "' is not a number: '" + text + "'");
    }

    void finish() const {
        if (kv_.empty()) return;
        std::string names;
        for (const auto& [k, v] : kv_) {
            if (!names.empty()) names += ", ";
            names += k;
        }
        throw config_error(kv_.begin()->first, "unknown config key(s): " + names);
    }

private:
    void note_default(const std::string& key, const std::string& value) {
        if (provenance_) provenance_->push_back("defaulted " + key + " = " + value);
    }

    std::map<std::string, std::string> kv_;
    std::vector<std::string>* provenance_;
};

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config",
                               "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw config_error("config",
                               "line " + std::to_string(line_no) + ": empty key or value");
        }
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
            throw config_error(key, "unknown config key: '" + key + "'");
        }
        kv[key] = value;  // last occurrence wins
    }
    return kv;
}

std::map<std::string, std::string> preset_table1() {
    return {
        {"scenario", "outage-vs-tau"},
        {"deployment", "tx-side"},
        {"scheme", "ts"},
        {"n_elements", "250"},
    };
}

Scenario parse_scenario(const std::string& v) {
    if (v == "outage-vs-tau") return Scenario::outage_vs_tau;
    if (v == "outage-vs-split") return Scenario::outage_vs_split;
    if (v == "nmin-vs-distance") return Scenario::nmin_vs_distance;
    if (v == "ee-vs-n") return Scenario::ee_vs_n;
    if (v == "moment-validation") return Scenario::moment_validation;
    throw config_error("scenario", "unknown scenario '" + v + "'");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::outage_vs_tau: return "outage-vs-tau";
        case Scenario::outage_vs_split: return "outage-vs-split";
        case Scenario::nmin_vs_distance: return "nmin-vs-distance";
        case Scenario::ee_vs_n: return "ee-vs-n";
        case Scenario::moment_validation: return "moment-validation";
    }
    return "";
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace

void ExperimentSpec::validate() const {
    system.validate();
    deployment.validate();
    scheme.validate();
    quantizer.validate();
    if (truncation < 1) throw config_error("truncation_L", "truncation_L must be positive");
    if (grid.points < 2) throw config_error("grid_points", "grid needs at least 2 points");
    if (!(grid.start < grid.stop)) {
        throw config_error("grid_start", "grid_start must be below grid_stop");
    }
    if (!(outage_target > 0.0 && outage_target <= 1.0)) {
        throw config_error("outage_target", "outage_target must lie in (0, 1]");
    }
    switch (scenario) {
        case Scenario::outage_vs_tau:
            if (scheme.kind != outage::SchemeKind::time_switching) {
                throw config_error("scheme", "outage-vs-tau requires scheme = ts");
            }
            if (!(grid.start > 0.0 && grid.stop < 1.0)) {
                throw config_error("grid_start", "tau grid must stay inside (0, 1)");
            }
            break;
        case Scenario::outage_vs_split:
            if (scheme.kind != outage::SchemeKind::element_splitting) {
                throw config_error("scheme", "outage-vs-split requires scheme = es");
            }
            if (grid.start < 0.0 || grid.stop > 1.0) {
                throw config_error("grid_start", "split grid must stay inside [0, 1]");
            }
            break;
        case Scenario::nmin_vs_distance: {
            const double total = deployment.leg1.distance_m + deployment.leg2.distance_m;
            if (!(grid.start > 0.0 && grid.stop < total)) {
                throw config_error("grid_start",
                                   "distance grid must stay inside (0, d1_m + d2_m)");
            }
            break;
        }
        case Scenario::ee_vs_n:
        case Scenario::moment_validation:
            if (grid.start < 1.0) {
                throw config_error("grid_start", "element grid must start at 1 or above");
            }
            if (scenario == Scenario::moment_validation && (!trials || trials->n_trials == 0)) {
                throw config_error("trials", "moment-validation requires trials >= 1");
            }
            break;
    }
}

ExperimentSpec load_config(const std::string& path_or_preset) {
    return load_config(path_or_preset, {});
}

ExperimentSpec load_config(const std::string& path_or_preset,
                           const std::vector<std::string>& overrides) {
    std::string text;
    if (path_or_preset == "paper-table-1") {
        for (const auto& [k, v] : preset_table1()) text += k + " = " + v + "\n";
    } else {
        std::ifstream in(path_or_preset);
        if (!in) {
            throw config_error("config", "cannot open config file '" + path_or_preset + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    for (const auto& ov : overrides) text += "\n" + ov;
    return parse_config_text(text);
}

std::string peek_key(const std::string& path_or_preset,
                     const std::vector<std::string>& overrides, const std::string& key) {
    std::string text;
    if (path_or_preset == "paper-table-1") {
        for (const auto& [k, v] : preset_table1()) text += k + " = " + v + "\n";
    } else {
        std::ifstream in(path_or_preset);
        if (!in) {
            throw config_error("config", "cannot open config file '" + path_or_preset + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    for (const auto& ov : overrides) text += "\n" + ov;
    auto kv = parse_key_values(text);
    if (auto preset = kv.find("preset"); preset != kv.end() && preset->second == "paper-table-1") {
        auto seeded = preset_table1();
        for (auto& [k, v] : kv) seeded[k] = v;
        kv = std::move(seeded);
    }
    const auto it = kv.find(key);
    return it == kv.end() ? "" : it->second;
}

ExperimentSpec parse_config_text(const std::string& text) {
    auto kv = parse_key_values(text);

    // a preset seeds the map; explicit keys win
    if (auto it = kv.find("preset"); it != kv.end()) {
        if (it->second != "paper-table-1") {
            throw config_error("preset", "unknown preset '" + it->second + "'");
        }
        kv.erase(it);
        auto seeded = preset_table1();
        for (auto& [k, v] : kv) seeded[k] = v;
        kv = std::move(seeded);
    }

    {
        std::string missing;
        for (const char* req : {"scenario", "deployment", "scheme"}) {
            if (!kv.count(req)) missing += missing.empty() ? req : std::string(", ") + req;
        }
        if (!missing.empty()) {
            throw config_error("config", "missing required key(s): " + missing);
        }
    }

    ExperimentSpec spec;
    Resolver r(std::move(kv), &spec.provenance);

    spec.scenario = parse_scenario(r.take_required("scenario"));

    const std::string side = r.take_required("deployment");
    const bool tx_side = side == "tx-side";
    if (!tx_side && side != "ue-side") {
        throw config_error("deployment", "deployment must be tx-side or ue-side");
    }

    // --- system ---
    const double freq = r.take_double("carrier_frequency_hz", 900e6);
    if (!(freq > 0.0)) throw config_error("carrier_frequency_hz", "frequency must be positive");
    spec.system.wavelength_m = kSpeedOfLight / freq;
    spec.system.transmit_power_w = r.take_double("transmit_power_w", 0.4);
    if (!(spec.system.transmit_power_w > 0.0)) {
        throw config_error("transmit_power_w", "transmit_power_w must be positive");
    }
    spec.system.tx_gain = db_to_linear(r.take_double("tx_gain_db", 4.0));
    spec.system.rx_gain = db_to_linear(r.take_double("rx_gain_db", 0.0));
    spec.system.noise_power_w = db_to_linear(r.take_double("noise_power_dbw", -100.0));
    spec.system.conversion_efficiency = r.take_double("conversion_efficiency", 0.65);
    if (!(spec.system.conversion_efficiency > 0.0 && spec.system.conversion_efficiency <= 1.0)) {
        throw config_error("conversion_efficiency", "conversion_efficiency must lie in (0, 1]");
    }
    spec.system.pin_diode_power_w = r.take_double("pin_diode_power_w", 6e-5);
    if (spec.system.pin_diode_power_w < 0.0) {
        throw config_error("pin_diode_power_w", "pin_diode_power_w must be non-negative");
    }
    spec.system.controller_power_w = r.take_double("controller_power_w", 0.05);
    if (spec.system.controller_power_w < 0.0) {
        throw config_error("controller_power_w", "controller_power_w must be non-negative");
    }
    spec.system.block_duration_s = r.take_double("block_duration_s", 1.0);
    if (!(spec.system.block_duration_s > 0.0)) {
        throw config_error("block_duration_s", "block_duration_s must be positive");
    }
    spec.system.rate_threshold = r.take_double("rate_threshold", std::log2(11.0));
    if (spec.system.rate_threshold < 0.0) {
        throw config_error("rate_threshold", "rate_threshold must be non-negative");
    }

    // --- channel ---
    const double m = r.take_double("nakagami_m", 3.0);
    if (!(m >= 0.5)) throw config_error("nakagami_m", "nakagami_m must be >= 0.5");
    const double omega = r.take_double("nakagami_omega", 1.0);
    if (!(omega > 0.0)) throw config_error("nakagami_omega", "nakagami_omega must be positive");
    const double kappa = r.take_double("kappa", 3.0);
    if (kappa < 0.0) throw config_error("kappa", "kappa must be non-negative");

    double rice_k;
    bool rice_derived;
    const std::string rice_text = r.take_string("rice_k", "derived");
    if (rice_text == "derived") {
        if (m < 1.0) {
            throw config_error("rice_k",
                               "rice_k cannot be derived for nakagami_m < 1; set it explicitly");
        }
        rice_k = model::rice_k_from_m(m);
        rice_derived = true;
        spec.provenance.push_back("derived rice_k = " + fmt_double(rice_k) +
                                  " (from nakagami_m)");
    } else {
        rice_k = Resolver::parse_double("rice_k", rice_text);
        if (rice_k < 0.0) throw config_error("rice_k", "rice_k must be non-negative");
        rice_derived = false;
    }

    const double d1 = r.take_double("d1_m", tx_side ? 15.0 : 45.0);
    const double d2 = r.take_double("d2_m", tx_side ? 45.0 : 15.0);
    if (!(d1 > 0.0)) throw config_error("d1_m", "d1_m must be positive");
    if (!(d2 > 0.0)) throw config_error("d2_m", "d2_m must be positive");
    const double a_los = r.take_double("pathloss_exponent_los", 2.0);
    const double a_fad = r.take_double("pathloss_exponent_fading", 2.2);
    if (a_los < 0.0) throw config_error("pathloss_exponent_los", "exponent must be non-negative");
    if (a_fad < 0.0) throw config_error("pathloss_exponent_fading", "exponent must be non-negative");

    model::ChannelLeg los_leg;
    los_leg.is_los = true;
    los_leg.path_loss_exponent = a_los;
    model::ChannelLeg fading_leg;
    fading_leg.is_los = false;
    fading_leg.path_loss_exponent = a_fad;
    fading_leg.nakagami_shape = m;
    fading_leg.nakagami_spread = omega;
    fading_leg.phase_concentration = kappa;
    fading_leg.rice_factor = rice_k;
    fading_leg.rice_factor_derived = rice_derived;

    spec.deployment.side = tx_side ? model::DeploymentSide::tx_side : model::DeploymentSide::ue_side;
    if (tx_side) {
        los_leg.distance_m = d1;
        fading_leg.distance_m = d2;
        spec.deployment.leg1 = los_leg;
        spec.deployment.leg2 = fading_leg;
    } else {
        fading_leg.distance_m = d1;
        los_leg.distance_m = d2;
        spec.deployment.leg1 = fading_leg;
        spec.deployment.leg2 = los_leg;
    }

    // --- quantizer / scheme ---
    const long long bits = r.take_int("bits", 1);
    if (bits < 1 || bits > 24) throw config_error("bits", "bits must lie in [1, 24]");
    spec.quantizer.bits = static_cast<int>(bits);

    const long long n_default = tx_side ? 250 : 1500;
    const long long n_elems = r.take_int("n_elements", n_default);
    if (n_elems < 1) throw config_error("n_elements", "n_elements must be at least 1");

    const std::string scheme = r.take_required("scheme");
    const double tau = r.take_double("tau", 0.5);
    const double split_ratio = r.take_double("split_ratio", 0.5);
    if (scheme == "ts") {
        if (!(tau > 0.0 && tau < 1.0)) throw config_error("tau", "tau must lie in (0, 1)");
        spec.scheme = outage::SchemeConfig::time_switching(tau, static_cast<int>(n_elems));
    } else if (scheme == "es") {
        if (split_ratio < 0.0 || split_ratio > 1.0) {
            throw config_error("split_ratio", "split_ratio must lie in [0, 1]");
        }
        const int n1 = static_cast<int>(std::llround(split_ratio * static_cast<double>(n_elems)));
        spec.scheme =
            outage::SchemeConfig::element_splitting(n1, static_cast<int>(n_elems) - n1);
    } else {
        throw config_error("scheme", "scheme must be ts or es");
    }

    const long long trunc = r.take_int("truncation_L", phase::kDefaultTruncation);
    if (trunc < 1) throw config_error("truncation_L", "truncation_L must be positive");
    spec.truncation = static_cast<int>(trunc);

    // --- grid ---
    double g_start, g_stop;
    long long g_points;
    switch (spec.scenario) {
        case Scenario::outage_vs_tau:
            g_start = 0.01, g_stop = 0.99, g_points = 99;
            break;
        case Scenario::outage_vs_split:
            g_start = 0.0, g_stop = 1.0, g_points = 51;
            break;
        case Scenario::nmin_vs_distance:
            g_start = 10.0, g_stop = 25.0, g_points = 16;
            break;
        case Scenario::ee_vs_n:
            g_start = tx_side ? 150.0 : 600.0;
            g_stop = tx_side ? 250.0 : 1200.0;
            g_points = tx_side ? 11 : 13;
            break;
        case Scenario::moment_validation:
        default:
            g_start = 2.0, g_stop = 8.0, g_points = 4;
            break;
    }
    spec.grid.start = r.take_double("grid_start", g_start);
    spec.grid.stop = r.take_double("grid_stop", g_stop);
    const long long points = r.take_int("grid_points", g_points);
    if (points < 2 || points > 1000000) {
        throw config_error("grid_points", "grid_points must lie in [2, 1e6]");
    }
    spec.grid.points = static_cast<int>(points);

    // --- monte carlo ---
    const long long trials = r.take_int("trials", 0);
    if (trials < 0) throw config_error("trials", "trials must be non-negative");
    const long long seed = r.take_int("seed", 1);
    const std::string mode = r.take_string("mode", "paper-faithful");
    if (mode != "paper-faithful" && mode != "physical") {
        throw config_error("mode", "mode must be paper-faithful or physical");
    }
    if (trials > 0) {
        mc::TrialPlan plan;
        plan.n_trials = static_cast<std::uint64_t>(trials);
        plan.seed = static_cast<std::uint64_t>(seed);
        plan.mode = mode == "physical" ? mc::Mode::physical : mc::Mode::paper_faithful;
        spec.trials = plan;
    }

    spec.outage_target = r.take_double("outage_target", 1e-6);
    if (!(spec.outage_target > 0.0 && spec.outage_target <= 1.0)) {
        throw config_error("outage_target", "outage_target must lie in (0, 1]");
    }

    spec.output_path = r.take_string("output", "");
    const std::string format = r.take_string("format", "dat");
    if (format == "dat") {
        spec.format = TableFormat::dat;
    } else if (format == "csv") {
        spec.format = TableFormat::csv;
    } else {
        throw config_error("format", "format must be dat or csv");
    }

    r.finish();
    spec.validate();
    return spec;
}

std::string dump_config(const ExperimentSpec& spec) {
    const bool tx = spec.deployment.side == model::DeploymentSide::tx_side;
    const auto& fading = spec.deployment.fading_leg();
    const auto& los = spec.deployment.los_leg();
    std::ostringstream out;
    out << "scenario = " << scenario_name(spec.scenario) << "\n";
    out << "deployment = " << (tx ? "tx-side" : "ue-side") << "\n";
    out << "scheme = "
        << (spec.scheme.kind == outage::SchemeKind::time_switching ? "ts" : "es") << "\n";
    out << "n_elements = " << spec.scheme.n_total << "\n";
    out << "tau = " << fmt_double(spec.scheme.kind == outage::SchemeKind::time_switching
                                      ? spec.scheme.tau
                                      : 0.5)
        << "\n";
    out << "split_ratio = "
        << fmt_double(spec.scheme.kind == outage::SchemeKind::element_splitting
                          ? static_cast<double>(spec.scheme.n1) /
                                static_cast<double>(spec.scheme.n_total)
                          : 0.5)
        << "\n";
    out << "bits = " << spec.quantizer.bits << "\n";
    out << "carrier_frequency_hz = " << fmt_double(kSpeedOfLight / spec.system.wavelength_m)
        << "\n";
    out << "transmit_power_w = " << fmt_double(spec.system.transmit_power_w) << "\n";
    out << "tx_gain_db = " << fmt_double(linear_to_db(spec.system.tx_gain)) << "\n";
    out << "rx_gain_db = " << fmt_double(linear_to_db(spec.system.rx_gain)) << "\n";
    out << "noise_power_dbw = " << fmt_double(linear_to_db(spec.system.noise_power_w)) << "\n";
    out << "conversion_efficiency = " << fmt_double(spec.system.conversion_efficiency) << "\n";
    out << "pin_diode_power_w = " << fmt_double(spec.system.pin_diode_power_w) << "\n";
    out << "controller_power_w = " << fmt_double(spec.system.controller_power_w) << "\n";
    out << "block_duration_s = " << fmt_double(spec.system.block_duration_s) << "\n";
    out << "rate_threshold = " << fmt_double(spec.system.rate_threshold) << "\n";
    out << "nakagami_m = " << fmt_double(fading.nakagami_shape) << "\n";
    out << "nakagami_omega = " << fmt_double(fading.nakagami_spread) << "\n";
    out << "kappa = " << fmt_double(fading.phase_concentration) << "\n";
    if (fading.rice_factor_derived) {
        out << "rice_k = derived\n";
    } else {
        out << "rice_k = " << fmt_double(fading.rice_factor) << "\n";
    }
    out << "d1_m = " << fmt_double(spec.deployment.leg1.distance_m) << "\n";
    out << "d2_m = " << fmt_double(spec.deployment.leg2.distance_m) << "\n";
    out << "pathloss_exponent_los = " << fmt_double(los.path_loss_exponent) << "\n";
    out << "pathloss_exponent_fading = " << fmt_double(fading.path_loss_exponent) << "\n";
    out << "truncation_L = " << spec.truncation << "\n";
    out << "grid_start = " << fmt_double(spec.grid.start) << "\n";
    out << "grid_stop = " << fmt_double(spec.grid.stop) << "\n";
    out << "grid_points = " << spec.grid.points << "\n";
    out << "trials = " << (spec.trials ? spec.trials->n_trials : 0) << "\n";
    out << "seed = " << (spec.trials ? spec.trials->seed : 1) << "\n";
    out << "mode = "
        << (spec.trials && spec.trials->mode == mc::Mode::physical ? "physical"
                                                                   : "paper-faithful")
        << "\n";
    out << "outage_target = " << fmt_double(spec.outage_target) << "\n";
    if (!spec.output_path.empty()) out << "output = " << spec.output_path << "\n";
    out << "format = " << (spec.format == TableFormat::csv ? "csv" : "dat") << "\n";
    return out.str();
}

namespace {

double grid_value(const GridSpec& g, int i) {
    return g.start + (g.stop - g.start) * static_cast<double>(i) /
                         static_cast<double>(g.points - 1);
}

// runs fn(i) for every grid index on a worker pool, preserving row order
template <typename RowFn>
void for_each_row(int points, bool parallel, const RowFn& fn) {
    const int workers = parallel ? std::min(mc::default_worker_count(), points) : 1;
    if (workers <= 1) {
        for (int i = 0; i < points; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= points) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

[[noreturn]] void annotate_and_rethrow(int index, double axis) {
    const std::string where =
        "grid point " + std::to_string(index) + " (axis = " + fmt_double(axis) + "): ";
    try {
        throw;
    } catch (const infeasible_error& e) {
        throw infeasible_error(where + e.what());
    } catch (const search_exhausted_error& e) {
        throw search_exhausted_error(where + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(where + e.what());
    }
}

Table run_outage_sweep(const ExperimentSpec& spec) {
    const bool over_tau = spec.scenario == Scenario::outage_vs_tau;
    Table t;
    t.columns = {over_tau ? "tau" : "n1_ratio", "outage", "outage_uniform"};
    const bool with_mc = spec.trials.has_value();
    if (with_mc) {
        t.columns.insert(t.columns.end(), {"outage_mc", "mc_ci_lo", "mc_ci_hi"});
    }
    t.columns.push_back("ee");
    t.rows.assign(spec.grid.points, {});

    const int n_total = spec.scheme.n_total;
    auto row_fn = [&](int i) {
        const double axis = grid_value(spec.grid, i);
        try {
            outage::SchemeConfig sc;
            if (over_tau) {
                sc = outage::SchemeConfig::time_switching(axis, n_total);
            } else {
                const int n1 =
                    static_cast<int>(std::llround(axis * static_cast<double>(n_total)));
                sc = outage::SchemeConfig::element_splitting(n1, n_total - n1);
            }
            const auto prop = outage::outage_probability(spec.system, spec.deployment, sc,
                                                         spec.quantizer, spec.truncation,
                                                         cascade::MomentModel::proposed);
            const auto bench = outage::outage_probability(
                spec.system, spec.deployment, sc, spec.quantizer, spec.truncation,
                cascade::MomentModel::uniform_benchmark);
            std::vector<double> row = {axis, prop.probability, bench.probability};
            if (with_mc) {
                const auto est = mc::simulate_outage(spec.system, spec.deployment, sc,
                                                     spec.quantizer, *spec.trials);
                row.insert(row.end(), {est.value, est.ci95_lo, est.ci95_hi});
            }
            row.push_back(outage::ee_delivered_rate_per_joule(
                spec.system.rate_threshold, prop.probability, spec.system.transmit_power_w,
                spec.system.block_duration_s));
            t.rows[i] = std::move(row);
        } catch (...) {
            annotate_and_rethrow(i, axis);
        }
    };
    for_each_row(spec.grid.points, !with_mc, row_fn);
    return t;
}

Table run_nmin_sweep(const ExperimentSpec& spec) {
    Table t;
    const bool tx = spec.deployment.side == model::DeploymentSide::tx_side;
    t.columns = {tx ? "d1_m" : "d2_m", "n_min", "n_min_uniform"};
    t.rows.assign(spec.grid.points, {});
    const double total =
        spec.deployment.leg1.distance_m + spec.deployment.leg2.distance_m;

    auto row_fn = [&](int i) {
        const double axis = grid_value(spec.grid, i);
        try {
            model::Deployment dep = spec.deployment;
            if (tx) {
                dep.leg1.distance_m = axis;          // LoS hop on the x axis
                dep.leg2.distance_m = total - axis;
            } else {
                dep.leg2.distance_m = axis;
                dep.leg1.distance_m = total - axis;
            }
            const int nmin_p =
                outage::nmin_search(spec.system, dep, spec.scheme.kind, spec.quantizer,
                                    spec.truncation, spec.outage_target,
                                    cascade::MomentModel::proposed);
            const int nmin_b =
                outage::nmin_search(spec.system, dep, spec.scheme.kind, spec.quantizer,
                                    spec.truncation, spec.outage_target,
                                    cascade::MomentModel::uniform_benchmark);
            t.rows[i] = {axis, static_cast<double>(nmin_p), static_cast<double>(nmin_b)};
        } catch (...) {
            annotate_and_rethrow(i, axis);
        }
    };
    for_each_row(spec.grid.points, true, row_fn);
    return t;
}

Table run_ee_sweep(const ExperimentSpec& spec) {
    Table t;
    t.columns = {"n", "outage", "outage_uniform", "ee", "ee_uniform"};
    t.rows.assign(spec.grid.points, {});

    auto row_fn = [&](int i) {
        const double axis = grid_value(spec.grid, i);
        try {
            const int n = std::max(1, static_cast<int>(std::llround(axis)));
            const auto op_p =
                outage::optimal_point(spec.system, spec.deployment, spec.scheme.kind, n,
                                      spec.quantizer, spec.truncation,
                                      cascade::MomentModel::proposed);
            const auto op_b =
                outage::optimal_point(spec.system, spec.deployment, spec.scheme.kind, n,
                                      spec.quantizer, spec.truncation,
                                      cascade::MomentModel::uniform_benchmark);
            const auto ee = [&](double outage) {
                return outage::ee_delivered_rate_per_joule(
                    spec.system.rate_threshold, outage, spec.system.transmit_power_w,
                    spec.system.block_duration_s);
            };
            t.rows[i] = {static_cast<double>(n), op_p.outage, op_b.outage, ee(op_p.outage),
                         ee(op_b.outage)};
        } catch (...) {
            annotate_and_rethrow(i, axis);
        }
    };
    for_each_row(spec.grid.points, true, row_fn);
    return t;
}

Table run_moment_validation(const ExperimentSpec& spec) {
    Table t;
    t.columns = {"n", "ex", "ex_mc", "ex_se", "ex2", "ex2_mc", "ex2_se", "pass"};
    t.rows.assign(spec.grid.points, {});
    const auto& leg = spec.deployment.fading_leg();
    const auto mix = phase::PhaseMixture::from_leg(leg, spec.system.wavelength_m);

    for (int i = 0; i < spec.grid.points; ++i) {
        const double axis = grid_value(spec.grid, i);
        try {
            const int n = std::max(1, static_cast<int>(std::llround(axis)));
            const double ex =
                cascade::moment_e_x(n, leg, mix, spec.quantizer, spec.truncation);
            const double ex2 =
                cascade::moment_e_x2(n, leg, mix, spec.quantizer, spec.truncation);
            const auto [est_x, est_x2] =
                mc::simulate_cascade_moments(n, leg, mix, spec.quantizer, *spec.trials);
            const bool pass = std::fabs(ex - est_x.value) <= 3.0 * est_x.std_error &&
                              std::fabs(ex2 - est_x2.value) <= 3.0 * est_x2.std_error;
            t.rows[i] = {static_cast<double>(n), ex,  est_x.value,  est_x.std_error,
                         ex2,                    est_x2.value, est_x2.std_error,
                         pass ? 1.0 : 0.0};
        } catch (...) {
            annotate_and_rethrow(i, axis);
        }
    }
    return t;
}

}  // namespace

Table run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    switch (spec.scenario) {
        case Scenario::outage_vs_tau:
        case Scenario::outage_vs_split:
            return run_outage_sweep(spec);
        case Scenario::nmin_vs_distance:
            return run_nmin_sweep(spec);
        case Scenario::ee_vs_n:
            return run_ee_sweep(spec);
        case Scenario::moment_validation:
            return run_moment_validation(spec);
    }
    throw std::logic_error("run_experiment: unhandled scenario");
}

std::string tool_version() { return "zeris 0.1.0"; }

}  // namespace zeris::experiment
