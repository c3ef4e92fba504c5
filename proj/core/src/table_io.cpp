#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zeris/experiment.hpp"

namespace zeris::experiment {

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string render_table(const Table& table, TableFormat format) {
    std::ostringstream out;
    const char sep = format == TableFormat::csv ? ',' : ' ';
    if (format == TableFormat::dat) out << '#';
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out << sep;
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::logic_error("render_table: ragged row");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << sep;
            out << fmt9(row[c]);
        }
        out << '\n';
    }
    return out.str();
}

void write_table(const Table& table, const std::string& path, TableFormat format) {
    const std::string text = render_table(table, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_table: cannot open '" + path + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("write_table: write failed for '" + path + "'");
    }
}

void write_provenance(const ExperimentSpec& spec, const std::string& table_path) {
    const std::string path = table_path + ".provenance.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_provenance: cannot open '" + path + "'");
    }
    out << "tool = " << tool_version() << "\n";
    out << "table = " << table_path << "\n";
    out << "--- resolved config ---\n";
    out << dump_config(spec);
    if (!spec.provenance.empty()) {
        out << "--- defaults and derivations ---\n";
        for (const auto& line : spec.provenance) out << line << "\n";
    }
    if (!out) {
        throw std::runtime_error("write_provenance: write failed for '" + path + "'");
    }
}

}  // namespace zeris::experiment
