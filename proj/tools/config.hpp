#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace gph::cli {

using json = nlohmann::ordered_json;

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    std::string output;            // empty: decided by the runner
    json params = json::object();  // as written, before defaults
};

// YAML or JSON text. Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Numbers may also be written as multiples of pi: "pi", "0.34pi", "pi/2", "3*pi/4".
double parse_number(const json& value, const std::string& field);

}  // namespace gph::cli
