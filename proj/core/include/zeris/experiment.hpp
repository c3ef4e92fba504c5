#ifndef ZERIS_EXPERIMENT_HPP
#define ZERIS_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "zeris/mc.hpp"
#include "zeris/model.hpp"
#include "zeris/outage.hpp"
#include "zeris/phase.hpp"

namespace zeris::experiment {

enum class Scenario {
    outage_vs_tau,
    outage_vs_split,
    nmin_vs_distance,
    ee_vs_n,
    moment_validation,
};

enum class TableFormat { dat, csv };

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
};

/// Fully resolved experiment description. Produced by load_config, which
/// applies defaults (logging each one to `provenance`) and validates every
/// field against its domain.
struct ExperimentSpec {
    Scenario scenario = Scenario::outage_vs_tau;
    model::SystemConfig system;
    model::Deployment deployment;
    outage::SchemeConfig scheme;
    phase::QuantizerConfig quantizer;
    int truncation = phase::kDefaultTruncation;
    GridSpec grid;
    std::optional<mc::TrialPlan> trials;
    double outage_target = 1e-6;
    std::string output_path;  // empty writes to stdout, no sidecar
    TableFormat format = TableFormat::dat;
    std::vector<std::string> provenance;

    void validate() const;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Load a config file (flat key = value lines, '#' comments) or the named
/// built-in preset ("paper-table-1"). Unknown keys are hard errors.
ExperimentSpec load_config(const std::string& path_or_preset);

/// Same, with command-line style "key=value" overrides applied on top.
ExperimentSpec load_config(const std::string& path_or_preset,
                           const std::vector<std::string>& overrides);

/// Parse a config from its text content (used by load_config and tests).
ExperimentSpec parse_config_text(const std::string& text);

/// Raw value of one key after preset expansion and overrides, without
/// resolving defaults or validating; empty when absent.
std::string peek_key(const std::string& path_or_preset,
                     const std::vector<std::string>& overrides, const std::string& key);

/// Serialize every resolved key; load_config(dump) round-trips exactly.
std::string dump_config(const ExperimentSpec& spec);

Table run_experiment(const ExperimentSpec& spec);

std::string render_table(const Table& table, TableFormat format);
void write_table(const Table& table, const std::string& path, TableFormat format);

/// Sidecar record with the resolved config, seed and tool version,
/// sufficient to reproduce every row of the table at `table_path`.
void write_provenance(const ExperimentSpec& spec, const std::string& table_path);

std::string tool_version();

}  // namespace zeris::experiment

#endif
