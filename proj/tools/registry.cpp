#include "registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gph/errors.hpp"
#include "gph/qcore.hpp"

namespace gph::cli {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ParamSpec number(std::string name, double fallback, std::string doc, double lo = -kInf, bool lo_open = false,
                 double hi = kInf) {
    return ParamSpec{std::move(name), ParamKind::Number, fallback, lo, lo_open, hi, {}, std::move(doc)};
}
ParamSpec positive(std::string name, double fallback, std::string doc) {
    return number(std::move(name), fallback, std::move(doc), 0.0, true);
}
ParamSpec non_negative(std::string name, double fallback, std::string doc) {
    return number(std::move(name), fallback, std::move(doc), 0.0, false);
}
ParamSpec optional(std::string name, std::string doc) {
    return ParamSpec{std::move(name), ParamKind::OptionalNumber, nullptr, 0.0, true, kInf, {}, std::move(doc)};
}
ParamSpec integer(std::string name, long long fallback, double lo, std::string doc) {
    return ParamSpec{std::move(name), ParamKind::Integer, fallback, lo, false, kInf, {}, std::move(doc)};
}
ParamSpec list(std::string name, std::vector<double> fallback, std::string doc) {
    return ParamSpec{std::move(name), ParamKind::NumberList, fallback, -kInf, false, kInf, {}, std::move(doc)};
}
ParamSpec vec3(std::string name, std::vector<double> fallback, std::string doc) {
    return ParamSpec{std::move(name), ParamKind::Vector3, fallback, -kInf, false, kInf, {}, std::move(doc)};
}
ParamSpec choice(std::string name, std::string fallback, std::vector<std::string> options, std::string doc) {
    return ParamSpec{std::move(name), ParamKind::Choice, fallback, -kInf, false, kInf, std::move(options),
                     std::move(doc)};
}

std::vector<ParamSpec> bipartite_env(double gamma0) {
    return {positive("omega", 1.0, "qubit frequency"),
            positive("gamma0", gamma0, "free-space decay rate"),
            positive("L", 1.0, "separation in units of c/omega"),
            optional("d", "distance to the conducting plane in units of c/omega; null for free space"),
            vec3("pol1", {1, 0, 0}, "dipole direction of qubit 1"),
            vec3("pol2", {1, 0, 0}, "dipole direction of qubit 2")};
}

std::vector<ParamSpec> sliding_spec() {
    return {positive("omega0", 0.2, "atomic frequency over the surface plasma frequency"),
            positive("Gamma", 1.0, "dielectric damping over the plasma frequency"),
            non_negative("v", 0.05, "velocity in units of d omega_s"),
            positive("mu2_over_d3", 0.005, "coupling mu^2 / d^3"),
            vec3("n_hat", {1, 0, 0}, "dipole direction"),
            number("vartheta0", pi / 2, "initial Bloch angle", 0.0, false, pi)};
}

std::vector<ParamSpec> trajectory_spec(std::size_t n_traj) {
    return {number("theta", 0.34 * pi, "field tilt", 0.0, false, pi),
            positive("Omega", 5e-3, "drive angular velocity over omega"),
            non_negative("Gamma", 1e-3, "relaxation rate gamma_- over omega; gamma_d = 0.32 Gamma"),
            non_negative("gamma_plus", 0.0, "excitation rate over omega"),
            non_negative("gamma_z", 0.0, "fixed-axis channel rate over omega"),
            choice("dephasing_convention", "half", {"half", "literal"}, "weight of the Hermitian channels"),
            integer("n_traj", static_cast<long long>(n_traj), 100, "number of trajectories"),
            integer("bins", 64, 1, "histogram bins"),
            non_negative("dt", 0.0, "time step; 0 picks the default"),
            integer("sample_every", 10, 1, "record every k-th smooth state")};
}

std::vector<double> grid(double a, double b, std::size_t n) { return linspace(a, b, n); }

std::vector<ExperimentInfo> build_registry() {
    std::vector<ExperimentInfo> r;
    r.push_back({"spin-berry", "driven spin-1/2 in a rotating field",
                 "Berry phase of psi_+ and the kinematic phase over one drive period",
                 {"theta", "phi", "kinematic_numeric", "kinematic_closed"},
                 {list("thetas", {pi / 6, pi / 3, 0.34 * pi, pi / 2}, "field tilts"),
                  positive("Omega", 1e-4, "drive angular velocity over omega"),
                  positive("omega", 1.0, "level splitting"),
                  integer("samples", 20001, 3, "states per period in the numeric phase")}});
    r.push_back({"spin-echo", "driven spin-1/2 in a rotating field",
                 "persistence of the two-cycle echo and its phase parameter",
                 {"theta", "persistence_adiabatic", "persistence", "echo_phase_adiabatic", "echo_phase"},
                 {list("thetas", {pi / 6, pi / 3, 0.34 * pi, pi / 2}, "field tilts"),
                  positive("Omega", 1e-3, "drive angular velocity over omega")}});
    r.push_back({"jc-unitary", "Jaynes-Cummings atom-mode system",
                 "unitary geometric phase of the dressed state over one Rabi period",
                 {"Delta", "cos_theta", "phi_u", "adiabatic"},
                 {list("deltas", {0.0, 0.1, 2.0, 10.0}, "detunings in units of g"),
                  positive("g", 1.0, "atom-mode coupling"),
                  integer("n", 0, 0, "excitation doublet"),
                  positive("periods", 1.0, "evolution time in Rabi periods")}});
    r.push_back({"jc-open", "Jaynes-Cummings atom-mode system",
                 "geometric phase under photon loss and pumping along the evolution",
                 {"t", "phi_g", "phi_u", "delta_phi"},
                 {number("Delta", 0.5, "detuning in units of g"),
                  positive("g", 1.0, "atom-mode coupling"),
                  non_negative("gamma", 0.1, "photon loss rate"),
                  non_negative("pump", 0.005, "incoherent pump rate"),
                  positive("periods", 3.0, "final time in Rabi periods"),
                  integer("points", 30, 1, "output times"),
                  integer("samples_per_period", 4000, 16, "state samples per period")}});
    r.push_back({"jc-delta-scan", "Jaynes-Cummings atom-mode system",
                 "phase correction after a fixed number of periods as a function of detuning",
                 {"Delta", "delta_phi"},
                 {list("deltas", grid(0.0, 1.0, 21), "detunings in units of g"),
                  positive("g", 1.0, "atom-mode coupling"),
                  non_negative("gamma", 0.1, "photon loss rate"),
                  non_negative("pump", 0.005, "incoherent pump rate"),
                  positive("periods", 3.0, "evolution time in Rabi periods"),
                  integer("samples_per_period", 2000, 16, "state samples per period")}});

    auto env_dyn = bipartite_env(1e-3);
    env_dyn.push_back(number("theta", pi / 2, "initial state angle", 0.0, false, pi));
    env_dyn.push_back(positive("t_max", 2e4, "final time in units of 1/omega"));
    env_dyn.push_back(integer("points", 200, 2, "output times"));
    r.push_back({"bipartite-dynamics", "two qubits in the electromagnetic vacuum",
                 "populations, coherence and concurrence of the two-qubit state",
                 {"t", "rho_11", "rho_22", "rho_33", "rho_44", "abs_rho_41", "concurrence"},
                 env_dyn});

    auto env_conc = bipartite_env(1.0);
    env_conc[2].fallback = 2.0;
    env_conc.push_back(number("theta", pi / 3, "initial state angle", 0.0, false, pi));
    env_conc.push_back(positive("t_max", 300.0, "final time in units of 1/omega"));
    env_conc.push_back(integer("points", 3000, 2, "time grid"));
    r.push_back({"bipartite-concurrence", "two qubits in the electromagnetic vacuum",
                 "concurrence along the evolution and its sudden birth and death times", {"t", "concurrence"},
                 env_conc});

    auto env_gp = bipartite_env(1e-3);
    env_gp.push_back(list("thetas", {pi / 6, pi / 3, pi / 2}, "initial state angles"));
    env_gp.push_back(positive("t", 2.0 * pi, "evolution time in units of 1/omega"));
    r.push_back({"bipartite-gp", "two qubits in the electromagnetic vacuum",
                 "geometric phase of the two-qubit state and its expansion in gamma0",
                 {"theta", "phi_g", "phi_u", "delta_phi", "order1", "order2"},
                 env_gp});

    auto sl_dyn = sliding_spec();
    sl_dyn.push_back(positive("periods", 40.0, "final time in natural periods"));
    sl_dyn.push_back(integer("points", 400, 2, "output times"));
    r.push_back({"sliding-dynamics", "atom sliding over a dielectric surface",
                 "excited population and coherence of the moving atom",
                 {"t", "excited_population", "abs_coherence"},
                 sl_dyn});

    auto sl_tau = sliding_spec();
    sl_tau.erase(sl_tau.begin() + 2);
    sl_tau.push_back(list("velocities", {0.0, 0.01, 0.02, 0.04}, "velocities in units of d omega_s"));
    r.push_back({"sliding-taud", "atom sliding over a dielectric surface",
                 "decoherence time against velocity, numeric and Markov",
                 {"v", "tau_D", "tau_D_markov", "ratio", "ratio_markov"},
                 sl_tau});

    auto sl_gp = sliding_spec();
    sl_gp.erase(sl_gp.begin() + 2);
    sl_gp.push_back(list("velocities", {0.0, 0.01, 0.02, 0.04}, "velocities in units of d omega_s"));
    sl_gp.push_back(positive("periods", 50.0, "evolution time in natural periods"));
    r.push_back({"sliding-gp", "atom sliding over a dielectric surface",
                 "geometric phase correction of the moving atom relative to rest",
                 {"v", "phi_g", "phi_u", "delta_phi", "ratio"},
                 sl_gp});

    r.push_back({"friction-force", "atom sliding over a dielectric surface",
                 "vacuum friction force on a particle moving over a lossy plate", {"v", "force"},
                 {non_negative("lambda2g2", 1.0, "coupling product lambda^2 g^2"),
                  positive("omega", 1.0, "particle frequency"),
                  positive("Omega", 1.0, "plate oscillator frequency"),
                  positive("d", 1.0, "height above the plate"),
                  list("velocities", {0.05, 0.1, 0.2, 0.3}, "velocities")}});

    r.push_back({"traj-phase-dist", "quantum trajectories of the driven spin",
                 "distribution of the geometric phase over monitored trajectories", {"bin_center", "probability"},
                 trajectory_spec(1000)});
    r.push_back({"traj-echo-dist", "quantum trajectories of the driven spin",
                 "distribution of the echo phase over monitored two-cycle runs", {"bin_center", "probability"},
                 trajectory_spec(1000)});
    r.push_back({"topo-scan", "quantum trajectories of the driven spin",
                 "continuity-fixed no-jump phase against tilt and its winding number",
                 {"theta", "phi0_unwrapped"},
                 {positive("Omega", 1e-4, "drive angular velocity over omega"),
                  non_negative("Gamma", 0.0, "relaxation rate over omega"),
                  integer("n_theta", 101, 2, "tilt grid from 0 to pi"),
                  optional("compare_Omega", "second point for the phase difference"),
                  ParamSpec{"compare_Gamma", ParamKind::OptionalNumber, nullptr, 0.0, false, kInf, {},
                            "second point for the phase difference"}}});
    r.push_back({"singularity-find", "quantum trajectories of the driven spin",
                 "drive and dissipation where the no-jump evolution ends orthogonal",
                 {"theta", "Omega_over_omega", "Gamma_over_omega", "residual", "iterations"},
                 {number("theta", 0.34 * pi, "field tilt", 0.0, true, pi),
                  positive("Omega_lo", 4.5e-3, "search box"),
                  positive("Omega_hi", 5.2e-3, "search box"),
                  non_negative("Gamma_lo", 0.028, "search box"),
                  positive("Gamma_hi", 0.033, "search box")}});
    return r;
}

std::string bound_text(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void check_range(const ParamSpec& s, double v, const std::string& field) {
    if (!std::isfinite(v)) throw ConfigError(field + ": must be finite");
    if (s.lo_open ? !(v > s.lo) : !(v >= s.lo))
        throw ConfigError(field + ": must be " + (s.lo_open ? "> " : ">= ") + bound_text(s.lo));
    if (!(v <= s.hi)) throw ConfigError(field + ": must be <= " + bound_text(s.hi));
}

json resolve_one(const ParamSpec& s, const json& value, const std::string& field) {
    switch (s.kind) {
        case ParamKind::Number: {
            const double v = parse_number(value, field);
            check_range(s, v, field);
            return v;
        }
        case ParamKind::OptionalNumber: {
            if (value.is_null()) return nullptr;
            const double v = parse_number(value, field);
            check_range(s, v, field);
            return v;
        }
        case ParamKind::Integer: {
            double v = 0.0;
            if (value.is_number_integer()) v = value.get<double>();
            else if (value.is_number_float() && std::floor(value.get<double>()) == value.get<double>())
                v = value.get<double>();
            else throw ConfigError(field + ": expected an integer, got " + value.dump());
            check_range(s, v, field);
            return static_cast<long long>(v);
        }
        case ParamKind::NumberList:
        case ParamKind::Vector3: {
            if (!value.is_array()) throw ConfigError(field + ": expected a list");
            if (s.kind == ParamKind::Vector3 && value.size() != 3) throw ConfigError(field + ": expected 3 components");
            if (value.empty()) throw ConfigError(field + ": must not be empty");
            json out = json::array();
            for (std::size_t i = 0; i < value.size(); ++i)
                out.push_back(parse_number(value[i], field + "[" + std::to_string(i) + "]"));
            return out;
        }
        case ParamKind::Choice: {
            if (!value.is_string() ||
                std::find(s.choices.begin(), s.choices.end(), value.get<std::string>()) == s.choices.end()) {
                std::string allowed;
                for (const auto& c : s.choices) allowed += (allowed.empty() ? "" : ", ") + c;
                throw ConfigError(field + ": expected one of " + allowed);
            }
            return value;
        }
    }
    return value;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> reg = build_registry();
    return reg;
}

const ExperimentInfo& find_experiment(const std::string& name) {
    for (const auto& e : experiment_registry())
        if (e.name == name) return e;
    throw ConfigError("experiment: unknown experiment '" + name + "' (see `gphase-run list`)");
}

json resolve_params(const ExperimentInfo& info, const json& given) {
    if (!given.is_object()) throw ConfigError("params: expected a table");
    for (const auto& [key, value] : given.items()) {
        (void)value;
        const bool known = std::any_of(info.params.begin(), info.params.end(),
                                       [&](const ParamSpec& s) { return s.name == key; });
        if (!known) throw ConfigError("params." + key + ": unknown field for " + info.name);
    }
    json out = json::object();
    for (const auto& s : info.params) {
        const std::string field = "params." + s.name;
        out[s.name] = resolve_one(s, given.contains(s.name) ? given.at(s.name) : s.fallback, field);
    }
    return out;
}

ExperimentConfig default_config(const std::string& name) {
    const ExperimentInfo& info = find_experiment(name);
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.params = resolve_params(info, json::object());
    return cfg;
}

}  // namespace gph::cli
