#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace gph::cli {

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string format_number(double x);
std::string to_csv(const Table& t);

struct RunOutput {
    std::vector<Table> tables;  // the first one is the experiment's main table
    json summary = json::object();
    std::string partial_failure;  // non-empty when part of an ensemble had to be dropped
};

RunOutput run_experiment(const std::string& name, const json& resolved_params, std::uint64_t seed, unsigned threads);

struct RunReport {
    int exit_code = 0;
    std::vector<std::string> files;
    std::string message;
};

// Validates, runs and writes <dir>/<table>.csv, summary.json and manifest.json.
// Exit codes: 0 ok, 1 configuration error, 2 runtime error.
RunReport execute(const ExperimentConfig& cfg, const std::string& out_dir, unsigned threads);

// --output-dir, then the config's output, then $GPHASE_OUTPUT_DIR, then ./gphase-output.
std::string resolve_output_dir(const std::string& flag, const ExperimentConfig& cfg);

}  // namespace gph::cli
