#include "config.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "gph/errors.hpp"
#include "gph/types.hpp"

namespace gph::cli {

namespace {

json scalar_to_json(const YAML::Node& node) {
    const std::string& text = node.Scalar();
    if (node.Tag() == "!") return text;  // quoted
    if (text == "~" || text == "null" || text == "Null" || text == "NULL" || text.empty()) return nullptr;
    if (text == "true" || text == "True") return true;
    if (text == "false" || text == "False") return false;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size() && text.front() != '-') return v;
    } catch (const std::exception&) {
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    return text;
}

json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined: return nullptr;
        case YAML::NodeType::Scalar: return scalar_to_json(node);
        case YAML::NodeType::Sequence: {
            json out = json::array();
            for (const auto& item : node) out.push_back(yaml_to_json(item));
            return out;
        }
        case YAML::NodeType::Map: {
            json out = json::object();
            for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return out;
        }
    }
    return nullptr;
}

}  // namespace

double parse_number(const json& value, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        static const std::regex pi_form(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)");
        std::smatch m;
        const std::string s = value.get<std::string>();
        if (std::regex_match(s, m, pi_form)) {
            double v = pi;
            if (m[1].matched) v *= std::stod(m[1].str());
            if (m[2].matched) v /= std::stod(m[2].str());
            return v;
        }
    }
    throw ConfigError(field + ": expected a number, got " + value.dump());
}

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = yaml_to_json(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be a table");

    ExperimentConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "experiment") {
            if (!value.is_string()) throw ConfigError("experiment: expected a name");
            cfg.experiment = value.get<std::string>();
        } else if (key == "seed") {
            if (value.is_number_unsigned()) cfg.seed = value.get<std::uint64_t>();
            else if (value.is_number_integer() && value.get<long long>() >= 0) cfg.seed = value.get<std::uint64_t>();
            else throw ConfigError("seed: expected a non-negative 64-bit integer");
        } else if (key == "output") {
            if (!value.is_string()) throw ConfigError("output: expected a path");
            cfg.output = value.get<std::string>();
        } else if (key == "params") {
            if (value.is_null()) continue;
            if (!value.is_object()) throw ConfigError("params: expected a table");
            cfg.params = value;
        } else {
            throw ConfigError(key + ": unknown field");
        }
    }
    if (cfg.experiment.empty()) throw ConfigError("experiment: missing");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace gph::cli
