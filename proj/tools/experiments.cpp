#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "gph/bipartite_vacuum.hpp"
#include "gph/dielectric_motion.hpp"
#include "gph/errors.hpp"
#include "gph/jc_model.hpp"
#include "gph/spin_rotating.hpp"
#include "gph/trajectories.hpp"
#include "gph/version.hpp"
#include "registry.hpp"

namespace gph::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) { return format_number(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }

struct Params {
    const json& p;
    double num(const char* k) const { return p.at(k).get<double>(); }
    std::size_t count(const char* k) const { return p.at(k).get<std::size_t>(); }
    int integer(const char* k) const { return p.at(k).get<int>(); }
    std::vector<double> list(const char* k) const { return p.at(k).get<std::vector<double>>(); }
    Eigen::Vector3d vec(const char* k) const {
        const auto v = list(k);
        return Eigen::Vector3d(v[0], v[1], v[2]);
    }
    bool has(const char* k) const { return !p.at(k).is_null(); }
    std::string text(const char* k) const { return p.at(k).get<std::string>(); }
};

struct Context {
    std::string name;
    Params params;
    std::uint64_t seed;
    unsigned threads;
    RunOutput out;

    Table& main_table() { return out.tables.front(); }
    Table& extra_table(const std::string& suffix, std::vector<std::string> columns) {
        out.tables.push_back(Table{name + "_" + suffix, std::move(columns), {}});
        return out.tables.back();
    }
};

// ---- driven spin --------------------------------------------------------

void spin_berry(Context& c) {
    const auto& P = c.params;
    for (double th : P.list("thetas")) {
        RotatingFieldParams p{P.num("omega"), P.num("Omega"), th, +1, 0.0};
        c.main_table().add({fmt(th), fmt(berry_phase(th, Branch::Plus)),
                            fmt(kinematic_gp_numeric(p, P.count("samples"))), fmt(kinematic_gp_closed(p))});
    }
}

void spin_echo(Context& c) {
    const auto& P = c.params;
    for (double th : P.list("thetas")) {
        const double pa = echo_persistence_unitary(th, true);
        const double pu = echo_persistence_unitary(th, false, P.num("Omega"));
        c.main_table().add({fmt(th), fmt(pa), fmt(pu), fmt(echo_parameter(pa)), fmt(echo_parameter(pu))});
    }
}

// ---- Jaynes-Cummings ------------------------------------------------------

void jc_unitary(Context& c) {
    const auto& P = c.params;
    for (double d : P.list("deltas")) {
        JCParams p{P.num("g"), d, 0.0, 0.0, P.integer("n")};
        c.main_table().add({fmt(d), fmt(p.cos_theta()), fmt(unitary_gp_jc(p, P.num("periods") * p.period())),
                            fmt(adiabatic_gp_jc(p, Branch::Plus))});
    }
}

void jc_open(Context& c) {
    const auto& P = c.params;
    JCParams p{P.num("g"), P.num("Delta"), P.num("gamma"), P.num("pump"), 0};
    const std::size_t n = P.count("points");
    const double t_end = P.num("periods") * p.period();
    std::size_t undefined = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(n);
        try {
            const OpenPhase o = open_gp_jc(p, t, P.count("samples_per_period"));
            c.main_table().add({fmt(t), fmt(o.phi_g), fmt(o.phi_u), fmt(o.delta_phi)});
        } catch (const OrthogonalEndpoints&) {
            // The phase is undefined where the state is orthogonal to its start.
            ++undefined;
            c.main_table().add({fmt(t), "nan", "nan", "nan"});
        }
    }
    c.out.summary["undefined_points"] = undefined;
}

void jc_scan(Context& c) {
    const auto& P = c.params;
    JCParams base{P.num("g"), 0.0, P.num("gamma"), P.num("pump"), 0};
    const auto deltas = P.list("deltas");
    const auto dphi = jc_delta_scan(base, deltas, P.num("periods"), P.count("samples_per_period"));
    for (std::size_t k = 0; k < deltas.size(); ++k) c.main_table().add({fmt(deltas[k]), fmt(dphi[k])});
    c.out.summary["interior_extrema"] = count_interior_extrema(dphi);
}

// ---- two qubits -----------------------------------------------------------

BipartiteEnvSpec bipartite_env(const Params& P) {
    BipartiteEnvSpec env;
    env.omega = P.num("omega");
    env.gamma0 = P.num("gamma0");
    env.L_tilde = P.num("L");
    if (P.has("d")) env.d_tilde = 2.0 * P.num("d");  // image separation 2 d
    env.pol1 = P.vec("pol1");
    env.pol2 = P.vec("pol2");
    return env;
}

void warn_coeffs(Context& c, const BipartiteEnvSpec& env) {
    const auto k = compute_coeffs(env);
    if (!k.warnings.empty()) c.out.summary["warnings"] = k.warnings;
}

void bipartite_dynamics(Context& c) {
    const auto& P = c.params;
    const BipartiteEnvSpec env = bipartite_env(P);
    warn_coeffs(c, env);
    const auto times = linspace(0.0, P.num("t_max"), P.count("points"));
    const auto rhos = evolve_bipartite(env, P.num("theta"), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const CMat& r = rhos[k];
        c.main_table().add({fmt(times[k]), fmt(r(0, 0).real()), fmt(r(1, 1).real()), fmt(r(2, 2).real()),
                            fmt(r(3, 3).real()), fmt(std::abs(r(3, 0))), fmt(concurrence(r))});
    }
    c.out.summary["coherence_decay_time"] = coherence_decay_time(env, P.num("theta"));
}

void bipartite_concurrence(Context& c) {
    const auto& P = c.params;
    const BipartiteEnvSpec env = bipartite_env(P);
    warn_coeffs(c, env);
    const auto times = linspace(0.0, P.num("t_max"), P.count("points"));
    const auto rhos = evolve_bipartite(env, P.num("theta"), times);
    for (std::size_t k = 0; k < times.size(); ++k) c.main_table().add({fmt(times[k]), fmt(concurrence(rhos[k]))});
    c.out.summary["transitions"] = concurrence_transitions(env, P.num("theta"), P.num("t_max"), P.count("points"));
}

void bipartite_gp(Context& c) {
    const auto& P = c.params;
    const BipartiteEnvSpec env = bipartite_env(P);
    warn_coeffs(c, env);
    for (double th : P.list("thetas")) {
        const BipartitePhase ph = open_gp_bipartite(env, th, P.num("t"));
        const GpExpansion ex = gp_expansion_bipartite(env, th);
        c.main_table().add(
            {fmt(th), fmt(ph.phi_g), fmt(ph.phi_u), fmt(ph.delta_phi), fmt(ex.order1), fmt(ex.order2)});
    }
}

// ---- sliding atom -----------------------------------------------------------

SlidingAtomSpec sliding_spec(const Params& P, double v) {
    SlidingAtomSpec s;
    s.omega0_tilde = P.num("omega0");
    s.Gamma_tilde = P.num("Gamma");
    s.v = v;
    s.mu2_over_d3 = P.num("mu2_over_d3");
    s.n_hat = P.vec("n_hat");
    s.vartheta0 = P.num("vartheta0");
    s.validate();
    return s;
}

void sliding_dynamics(Context& c) {
    const auto& P = c.params;
    const SlidingAtomSpec s = sliding_spec(P, P.num("v"));
    const auto times = linspace(0.0, P.num("periods") * s.natural_period(), P.count("points"));
    for (const SlidingSample& h : sliding_history(s, times)) {
        const CMat rho = sliding_density(s, h);
        c.main_table().add({fmt(h.t), fmt(rho(0, 0).real()), fmt(h.coherence_abs(s.vartheta0))});
    }
    c.out.summary["steady_excited_population"] = steady_excited_population(s);
}

void sliding_taud(Context& c) {
    const auto& P = c.params;
    for (double v : P.list("velocities")) {
        const DecoherenceTime d = decoherence_time(sliding_spec(P, v));
        c.main_table().add({fmt(v), fmt(d.tau_D), fmt(d.tau_D_markov), fmt(d.ratio), fmt(d.ratio_markov)});
    }
    c.out.summary["markov_coefficient"] = decoherence_ratio_coefficient(P.num("omega0"), P.num("Gamma"));
}

void sliding_gp(Context& c) {
    const auto& P = c.params;
    for (double v : P.list("velocities")) {
        const SlidingAtomSpec s = sliding_spec(P, v);
        const SlidingPhase ph = open_gp_sliding(s, P.num("periods") * s.natural_period());
        c.main_table().add({fmt(v), fmt(ph.phi_g), fmt(ph.phi_u), fmt(ph.delta_phi), fmt(ph.ratio())});
    }
}

void friction(Context& c) {
    const auto& P = c.params;
    for (double v : P.list("velocities"))
        c.main_table().add(
            {fmt(v), fmt(friction_force(P.num("lambda2g2"), P.num("omega"), P.num("Omega"), P.num("d"), v))});
}

// ---- trajectories -----------------------------------------------------------

RotatingFieldParams traj_field(const Params& P) { return RotatingFieldParams{1.0, P.num("Omega"), P.num("theta"), +1, 0.0}; }

JumpChannelSet traj_channels(const Params& P) {
    JumpChannelSet ch = JumpChannelSet::from_dissipation(P.num("Gamma"), P.num("gamma_z"));
    ch.gamma_plus = P.num("gamma_plus");
    ch.convention = P.text("dephasing_convention") == "literal" ? DephasingConvention::Literal
                                                               : DephasingConvention::Half;
    return ch;
}

EnsembleOptions traj_options(const Params& P, unsigned threads) {
    EnsembleOptions o;
    o.n_bins = P.count("bins");
    o.threads = threads;
    o.trajectory.dt = P.num("dt");
    o.trajectory.sample_every = P.count("sample_every");
    return o;
}

void distribution_table(Table& t, const PhaseDistribution& d) {
    for (std::size_t j = 0; j < d.n_bins(); ++j) t.add({fmt(d.bin_center(j)), fmt(d.weights[j])});
}

void traj_phase(Context& c) {
    const auto& P = c.params;
    const std::size_t n = P.count("n_traj");
    const PhaseEnsemble e =
        phase_ensemble(traj_field(P), traj_channels(P), n, c.seed, traj_options(P, c.threads));
    distribution_table(c.main_table(), e.distribution);
    Table& t = c.extra_table("trajectories", {"phase", "jumps", "first_channel"});
    for (std::size_t i = 0; i < e.phases.size(); ++i)
        t.add({fmt(e.phases[i]), fmt(e.jump_counts[i]), channel_name(e.first_channel[i])});

    auto& s = c.out.summary;
    s["mean_jumps"] = e.mean_jumps;
    s["phi_a"] = e.phi_a;
    s["phi_0"] = std::isnan(e.phi_0) ? json(nullptr) : json(e.phi_0);
    s["phi_u"] = e.phi_u;
    s["phi_bar"] = e.phi_bar;
    s["mean_resultant_length"] = e.distribution.mean_resultant_length();
    s["accepted"] = e.phases.size();
    s["discarded"] = e.discarded;
    if (e.discard_fraction() >= 0.01)
        c.out.partial_failure = std::to_string(e.discarded) + " of " + std::to_string(n) +
                                " trajectories returned orthogonal to their initial state";
}

void traj_echo(Context& c) {
    const auto& P = c.params;
    const EchoEnsemble e = echo_ensemble(traj_field(P), traj_channels(P), P.count("n_traj"), c.seed,
                                         traj_options(P, c.threads));
    distribution_table(c.main_table(), e.distribution);
    Table& t = c.extra_table("realizations", {"persistence", "echo_phase", "jumps"});
    for (const auto& r : e.realizations) t.add({fmt(r.persistence), fmt(r.echo_phase), fmt(r.jumps)});
    auto& s = c.out.summary;
    s["mean_jumps"] = e.mean_jumps;
    s["nojump_echo_phase"] = e.nojump_echo_phase;
    json peaks = json::array();
    const auto& w = e.distribution.weights;
    const double top = *std::max_element(w.begin(), w.end());
    for (std::size_t k : e.distribution.peaks(0.01 * top, 3)) peaks.push_back(e.distribution.bin_center(k));
    s["peaks"] = peaks;
}

void topo(Context& c) {
    const auto& P = c.params;
    const auto grid = linspace(0.0, pi, P.count("n_theta"));
    const TopoScan s = topo_scan(grid, P.num("Omega"), P.num("Gamma"));
    for (std::size_t k = 0; k < s.theta.size(); ++k) c.main_table().add({fmt(s.theta[k]), fmt(s.phi0[k])});
    c.out.summary["n"] = s.n;
    if (P.has("compare_Omega") != P.has("compare_Gamma"))
        throw ConfigError("params.compare_Omega: needs compare_Gamma as well");
    if (P.has("compare_Omega")) {
        const auto d = topo_difference(grid, P.num("Omega"), P.num("Gamma"), P.num("compare_Omega"),
                                       P.num("compare_Gamma"));
        Table& t = c.extra_table("difference", {"theta", "delta"});
        for (std::size_t k = 0; k < grid.size(); ++k) t.add({fmt(grid[k]), fmt(d[k])});
        c.out.summary["n_compare"] = topo_scan(grid, P.num("compare_Omega"), P.num("compare_Gamma")).n;
        c.out.summary["delta_at_pi"] = d.back();
    }
}

void singularity(Context& c) {
    const auto& P = c.params;
    if (!(P.num("Omega_hi") > P.num("Omega_lo"))) throw ConfigError("params.Omega_hi: must exceed Omega_lo");
    if (!(P.num("Gamma_hi") > P.num("Gamma_lo"))) throw ConfigError("params.Gamma_hi: must exceed Gamma_lo");
    const SingularPoint sp =
        find_singularity(P.num("theta"), P.num("Omega_lo"), P.num("Omega_hi"), P.num("Gamma_lo"), P.num("Gamma_hi"));
    c.main_table().add({fmt(P.num("theta")), fmt(sp.Omega_over_omega), fmt(sp.Gamma_over_omega), fmt(sp.residual),
                        fmt(sp.iterations)});
}

const std::map<std::string, std::function<void(Context&)>>& runners() {
    static const std::map<std::string, std::function<void(Context&)>> m = {
        {"spin-berry", spin_berry},
        {"spin-echo", spin_echo},
        {"jc-unitary", jc_unitary},
        {"jc-open", jc_open},
        {"jc-delta-scan", jc_scan},
        {"bipartite-dynamics", bipartite_dynamics},
        {"bipartite-concurrence", bipartite_concurrence},
        {"bipartite-gp", bipartite_gp},
        {"sliding-dynamics", sliding_dynamics},
        {"sliding-taud", sliding_taud},
        {"sliding-gp", sliding_gp},
        {"friction-force", friction},
        {"traj-phase-dist", traj_phase},
        {"traj-echo-dist", traj_echo},
        {"topo-scan", topo},
        {"singularity-find", singularity},
    };
    return m;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
        s += '\n';
    }
    return s;
}

RunOutput run_experiment(const std::string& name, const json& resolved_params, std::uint64_t seed, unsigned threads) {
    const ExperimentInfo& info = find_experiment(name);
    const auto it = runners().find(name);
    if (it == runners().end()) throw ConfigError("experiment: no runner for '" + name + "'");
    Context c{name, Params{resolved_params}, seed, threads == 0 ? 1u : threads, {}};
    c.out.tables.push_back(Table{name, info.columns, {}});
    it->second(c);
    return c.out;
}

std::string resolve_output_dir(const std::string& flag, const ExperimentConfig& cfg) {
    if (!flag.empty()) return flag;
    if (!cfg.output.empty()) return cfg.output;
    if (const char* env = std::getenv("GPHASE_OUTPUT_DIR"); env && *env) return env;
    return "gphase-output";
}

RunReport execute(const ExperimentConfig& cfg, const std::string& out_dir, unsigned threads) {
    RunReport rep;
    json resolved;
    try {
        resolved = resolve_params(find_experiment(cfg.experiment), cfg.params);
    } catch (const ConfigError& e) {
        rep.exit_code = 1;
        rep.message = e.what();
        return rep;
    }

    RunOutput out;
    try {
        out = run_experiment(cfg.experiment, resolved, cfg.seed, threads);
    } catch (const ConfigError& e) {
        rep.exit_code = 1;
        rep.message = e.what();
        return rep;
    } catch (const std::exception& e) {
        rep.exit_code = 2;
        rep.message = std::string(cfg.experiment) + " failed: " + e.what();
        return rep;
    }

    try {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        for (const Table& t : out.tables) {
            write_text(dir / (t.name + ".csv"), to_csv(t));
            rep.files.push_back(t.name + ".csv");
        }
        if (!out.partial_failure.empty()) out.summary["partial_failure"] = out.partial_failure;
        write_text(dir / "summary.json", out.summary.dump(2) + "\n");
        rep.files.push_back("summary.json");

        json manifest = json::object();
        manifest["library"] = {{"name", kLibraryName}, {"version", kLibraryVersion}};
        manifest["experiment"] = cfg.experiment;
        manifest["seed"] = cfg.seed;
        manifest["params"] = resolved;
        manifest["outputs"] = rep.files;
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");
        rep.files.push_back("manifest.json");
    } catch (const std::exception& e) {
        rep.exit_code = 2;
        rep.message = e.what();
        return rep;
    }

    if (!out.partial_failure.empty()) {
        rep.exit_code = 2;
        rep.message = "partial failure: " + out.partial_failure;
    }
    return rep;
}

}  // namespace gph::cli
