#pragma once

#include <limits>
#include <string>
#include <vector>

#include "config.hpp"

namespace gph::cli {

enum class ParamKind { Number, OptionalNumber, Integer, NumberList, Vector3, Choice };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::Number;
    json fallback;
    double lo = -std::numeric_limits<double>::infinity();
    bool lo_open = false;
    double hi = std::numeric_limits<double>::infinity();
    std::vector<std::string> choices;
    std::string doc;
};

struct ExperimentInfo {
    std::string name;
    std::string topic;    // physical system the experiment belongs to
    std::string summary;
    std::vector<std::string> columns;  // header of the main CSV
    std::vector<ParamSpec> params;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo& find_experiment(const std::string& name);

// Checks the given params against the schema and fills in defaults; numbers
// written as pi multiples are converted. Errors name the field as params.<key>.
json resolve_params(const ExperimentInfo& info, const json& given);

// The full default configuration of an experiment.
ExperimentConfig default_config(const std::string& name);

}  // namespace gph::cli
