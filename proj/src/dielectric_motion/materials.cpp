#include <fstream>

#include <json.hpp>

#include "gph/dielectric_motion.hpp"

namespace gph {

std::vector<MaterialPreset> builtin_material_presets() {
    MaterialPreset au{"Au", 9.7e15, 0.003, {{"Rb", {0.2}}, {"NV", {1e-5, 0.02}}}, 1e-9, 5e-9};
    MaterialPreset nsi{"nSi", 2.47e14, 1.0, {{"Rb", {8.0}}, {"NV", {0.0004, 0.2}}}, 1e-9, 5e-9};
    return {au, nsi};
}

std::vector<MaterialPreset> load_material_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open material presets '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("material presets '" + path + "': " + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1)
            throw ConfigError("material presets '" + path + "': unsupported version " + j.at("version").dump());
        const auto dist = j.at("distance_m").get<std::vector<double>>();
        if (dist.size() != 2) throw ConfigError("material presets: distance_m must hold [min, max]");
        std::vector<MaterialPreset> out;
        for (const auto& m : j.at("materials")) {
            MaterialPreset p;
            p.name = m.at("name").get<std::string>();
            p.omega_s = m.at("omega_s").get<double>();
            p.Gamma_tilde = m.at("Gamma_tilde").get<double>();
            p.atom_omega0 = m.at("atoms").get<std::map<std::string, std::vector<double>>>();
            p.d_min_m = dist[0];
            p.d_max_m = dist[1];
            out.push_back(std::move(p));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("material presets '" + path + "': " + e.what());
    }
}

const MaterialPreset& find_preset(const std::vector<MaterialPreset>& presets, const std::string& name) {
    for (const auto& p : presets)
        if (p.name == name) return p;
    throw ConfigError("unknown material preset '" + name + "'");
}

}  // namespace gph
