// Command line front end: loads a key = value config (or the built-in
// "paper-table-1" preset), runs one experiment scenario and emits a
// plot-ready table plus a provenance sidecar.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeris/errors.hpp"
#include "zeris/experiment.hpp"

namespace {

struct CommonOptions {
    std::string config = "paper-table-1";
    std::vector<std::string> sets;
    std::optional<long long> seed;
    std::optional<long long> trials;
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config,
                    "Config file path or preset name (default: paper-table-1)");
    cmd->add_option("--set", opt.sets, "Override a config key, e.g. --set bits=2")
        ->take_all();
    cmd->add_option("--seed", opt.seed, "RNG seed for Monte Carlo columns");
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials per grid point");
    cmd->add_option("--mode", opt.mode, "Monte Carlo mode: paper-faithful | physical")
        ->check(CLI::IsMember({"paper-faithful", "physical"}));
    cmd->add_option("--out", opt.out, "Output file (default: stdout, no sidecar)");
    cmd->add_option("--format", opt.format, "Output format: dat | csv")
        ->check(CLI::IsMember({"dat", "csv"}));
}

std::vector<std::string> collect_overrides(const CommonOptions& opt,
                                           const std::vector<std::string>& scenario_overrides) {
    std::vector<std::string> ov = scenario_overrides;
    for (const auto& s : opt.sets) ov.push_back(s);
    if (opt.seed) ov.push_back("seed=" + std::to_string(*opt.seed));
    if (opt.trials) ov.push_back("trials=" + std::to_string(*opt.trials));
    if (opt.mode) ov.push_back("mode=" + *opt.mode);
    if (opt.out) ov.push_back("output=" + *opt.out);
    if (opt.format) ov.push_back("format=" + *opt.format);
    return ov;
}

int run_scenario(const CommonOptions& opt, const std::vector<std::string>& scenario_overrides) {
    using namespace zeris::experiment;
    const auto spec = zeris::experiment::load_config(opt.config,
                                                     collect_overrides(opt, scenario_overrides));
    const Table table = run_experiment(spec);
    if (spec.output_path.empty()) {
        std::fputs(render_table(table, spec.format).c_str(), stdout);
    } else {
        write_table(table, spec.output_path, spec.format);
        write_provenance(spec, spec.output_path);
        std::printf("wrote %s (%zu rows) and %s.provenance.txt\n", spec.output_path.c_str(),
                    table.rows.size(), spec.output_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-energy reflecting surface outage and energy-efficiency calculator"};
    app.require_subcommand(1);

    CommonOptions analyze_opt, simulate_opt, sweep_opt, nmin_opt, ee_opt, validate_opt;

    auto* analyze = app.add_subcommand(
        "analyze", "Closed-form outage sweep over the scheme's free parameter (no Monte Carlo)");
    add_common(analyze, analyze_opt);

    auto* simulate = app.add_subcommand(
        "simulate", "Outage sweep with Monte Carlo validation columns");
    add_common(simulate, simulate_opt);

    auto* nmin = app.add_subcommand(
        "nmin", "Minimum element count meeting the outage target, versus deployment distance");
    add_common(nmin, nmin_opt);

    auto* ee = app.add_subcommand(
        "ee", "Energy efficiency at the optimal operating point, versus element count");
    add_common(ee, ee_opt);

    auto* validate = app.add_subcommand(
        "validate", "Closed-form cascade moments against Monte Carlo estimates");
    add_common(validate, validate_opt);

    auto* sweep = app.add_subcommand("sweep", "Run whatever scenario the config file selects");
    add_common(sweep, sweep_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        // the scheme kind picks the swept axis for analyze/simulate
        const auto scheme_scenario = [](const CommonOptions& o) {
            const std::string scheme =
                zeris::experiment::peek_key(o.config, o.sets, "scheme");
            return scheme == "es" ? std::string("scenario=outage-vs-split")
                                  : std::string("scenario=outage-vs-tau");
        };
        if (analyze->parsed()) {
            return run_scenario(analyze_opt, {scheme_scenario(analyze_opt), "trials=0"});
        }
        if (simulate->parsed()) {
            std::vector<std::string> ov = {scheme_scenario(simulate_opt)};
            const std::string trials =
                zeris::experiment::peek_key(simulate_opt.config, simulate_opt.sets, "trials");
            if (!simulate_opt.trials && (trials.empty() || trials == "0")) {
                ov.push_back("trials=1000000");
            }
            return run_scenario(simulate_opt, ov);
        }
        if (nmin->parsed()) {
            return run_scenario(nmin_opt, {"scenario=nmin-vs-distance", "trials=0"});
        }
        if (ee->parsed()) {
            return run_scenario(ee_opt, {"scenario=ee-vs-n", "trials=0"});
        }
        if (validate->parsed()) {
            std::vector<std::string> ov = {"scenario=moment-validation"};
            const auto has_trials = [&]() {
                if (validate_opt.trials) return true;
                for (const auto& s : validate_opt.sets) {
                    if (s.rfind("trials=", 0) == 0) return true;
                }
                return false;
            }();
            if (!has_trials) ov.push_back("trials=1000000");
            return run_scenario(validate_opt, ov);
        }
        return run_scenario(sweep_opt, {});
    } catch (const zeris::config_error& e) {
        std::fprintf(stderr, "config error [%s]: %s\n", e.field.c_str(), e.what());
        return 2;
    } catch (const zeris::infeasible_error& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 3;
    } catch (const zeris::search_exhausted_error& e) {
        std::fprintf(stderr, "search exhausted: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
