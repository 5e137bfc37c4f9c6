#ifndef QRMSIM_EXPERIMENTS_HPP
#define QRMSIM_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrmsim/dynamics.hpp"
#include "qrmsim/hamiltonian.hpp"
#include "qrmsim/hilbert.hpp"
#include "qrmsim/regimes.hpp"
#include "qrmsim/spectral.hpp"

// Batch experiment front-end: declarative JSON configs, five canonical
// experiments, CSV/JSON tabular output.
//
// Config files accept frequencies in Hz (field names end in _hz); the 2*pi
// factor is applied here, once, at the parsing boundary. Output files echo the
// fully resolved config so results are self-describing, and rows are written
// in deterministic input order regardless of worker completion order.

namespace qrmsim {

inline constexpr int schema_version = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;
    std::optional<IonParams> ion;
    std::optional<QRMParams> qrm;
    int fock_cutoff = 20;
    EvolutionConfig evolution;

    // evolve
    int initial_qubit = 0;
    int initial_n = 0;

    // jc-validate
    double window_oscillations = 3.0;

    // adiabatic
    std::vector<double> durations;
    double g_final = 0.0;
    RampKind ramp = RampKind::coupling;
    double delta_b_final = 0.0;

    // regime-map
    GridRange grid_omega0;
    GridRange grid_omega;
    RegimeThresholds thresholds;

    std::string output_path;
    std::string output_format = "csv";
    int jobs = 1;

    nlohmann::json resolved;  // full config with defaults materialized
};

namespace detail {

using nlohmann::json;

inline double get_num(const json& j, const std::string& key, double def,
                      bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError("config: missing required field '" + key + "'");
        return def;
    }
    if (!j.at(key).is_number())
        throw ConfigError("config: field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline double get_hz(const json& j, const std::string& key, double def_hz,
                     bool required = false) {
    return two_pi * get_num(j, key, def_hz, required);
}

inline IonParams parse_ion(const json& j) {
    IonParams p;
    p.nu = get_hz(j, "nu_hz", 0.0, true);
    p.eta = get_num(j, "eta", 0.0, true);
    p.omega_r = get_hz(j, "omega_r_hz", 0.0, true);
    p.omega_b = get_hz(j, "omega_b_hz", 0.0, true);
    p.delta_r = get_hz(j, "delta_r_hz", 0.0);
    p.delta_b = get_hz(j, "delta_b_hz", 0.0);
    p.phi_r = get_num(j, "phi_r", 0.0);
    p.phi_b = get_num(j, "phi_b", 0.0);
    p.omega0_lab = get_hz(j, "omega0_lab_hz", 0.0);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
}

inline QRMParams parse_qrm(const json& j) {
    QRMParams p;
    p.omega0_R = get_hz(j, "omega0_hz", 0.0, true);
    p.omega_R = get_hz(j, "omega_hz", 0.0, true);
    p.g = get_hz(j, "g_hz", 0.0, true);
    return p;
}

inline GridRange parse_range(const json& j, const std::string& key) {
    if (!j.contains(key))
        throw ConfigError("config: regime-map requires grid range '" + key + "'");
    const json& r = j.at(key);
    GridRange g;
    g.min = get_num(r, "min", 0.0, true);
    g.max = get_num(r, "max", 0.0, true);
    g.points = int(get_num(r, "points", 0.0, true));
    if (g.points < 1) throw ConfigError("config: grid '" + key + "' needs points >= 1");
    return g;
}

inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

struct CliOverrides {
    std::optional<int> fock_cutoff;
    std::optional<std::string> output_path;
    std::optional<std::string> output_format;
    std::optional<int> jobs;
};

inline ExperimentConfig parse_config(const nlohmann::json& j,
                                     const std::string& experiment,
                                     const CliOverrides& over = {}) {
    using detail::get_num;
    using nlohmann::json;

    static const std::vector<std::string> known = {
        "evolve", "jc-validate", "ground-state", "adiabatic", "regime-map"};
    if (std::find(known.begin(), known.end(), experiment) == known.end())
        throw ConfigError("config: unknown experiment '" + experiment + "'");

    ExperimentConfig cfg;
    cfg.experiment = experiment;
    if (j.contains("experiment") && j.at("experiment") != experiment)
        throw ConfigError("config: file declares experiment '" +
                          j.at("experiment").get<std::string>() +
                          "' but '" + experiment + "' was requested");

    const bool has_ion = j.contains("ion");
    const bool has_qrm = j.contains("qrm");
    if (has_ion && has_qrm)
        throw ConfigError("config: give exactly one of 'ion' or 'qrm', not both");
    if (has_ion) cfg.ion = detail::parse_ion(j.at("ion"));
    if (has_qrm) cfg.qrm = detail::parse_qrm(j.at("qrm"));

    if (experiment != "regime-map" && !has_ion && !has_qrm)
        throw ConfigError("config: experiment '" + experiment +
                          "' requires an 'ion' or 'qrm' block");
    if (experiment == "jc-validate" && !has_ion)
        throw ConfigError("config: jc-validate requires an 'ion' block");

    if (j.contains("space"))
        cfg.fock_cutoff = int(get_num(j.at("space"), "fock_cutoff", 20));
    if (over.fock_cutoff) cfg.fock_cutoff = *over.fock_cutoff;
    if (cfg.fock_cutoff < 1) throw ConfigError("config: fock_cutoff must be >= 1");

    if (j.contains("evolution")) {
        const json& e = j.at("evolution");
        cfg.evolution.t_final = get_num(e, "t_final_s", 0.0);
        cfg.evolution.dt = get_num(e, "dt_s", 0.0);
        cfg.evolution.steps_per_period = int(get_num(e, "steps_per_period", 40));
        cfg.evolution.snapshot_stride = int(get_num(e, "snapshot_stride", 1));
        if (e.contains("method")) {
            try {
                cfg.evolution.method = parse_integrator(e.at("method").get<std::string>());
            } catch (const std::invalid_argument& ex) {
                throw ConfigError(std::string("config: ") + ex.what());
            }
        }
        if (cfg.evolution.dt < 0.0) throw ConfigError("config: dt_s must be > 0");
        if (cfg.evolution.steps_per_period < 1)
            throw ConfigError("config: steps_per_period must be >= 1");
        if (cfg.evolution.snapshot_stride < 1)
            throw ConfigError("config: snapshot_stride must be >= 1");
    }

    if (experiment == "evolve") {
        if (cfg.evolution.t_final <= 0.0)
            throw ConfigError("config: evolve requires evolution.t_final_s > 0");
        if (j.contains("initial")) {
            const json& ini = j.at("initial");
            const std::string q = ini.value("qubit", "g");
            if (q != "g" && q != "e")
                throw ConfigError("config: initial.qubit must be 'g' or 'e'");
            cfg.initial_qubit = (q == "e") ? 1 : 0;
            cfg.initial_n = int(get_num(ini, "n", 0.0));
            if (cfg.initial_n < 0 || cfg.initial_n > cfg.fock_cutoff)
                throw ConfigError("config: initial.n out of range for fock_cutoff");
        }
    }

    if (experiment == "jc-validate") {
        cfg.window_oscillations = get_num(j, "window_oscillations", 3.0);
        if (cfg.window_oscillations <= 0.0)
            throw ConfigError("config: window_oscillations must be > 0");
    }

    if (experiment == "adiabatic") {
        if (!j.contains("schedule"))
            throw ConfigError("config: adiabatic requires a 'schedule' block");
        const json& s = j.at("schedule");
        if (!s.contains("duration_s"))
            throw ConfigError("config: schedule requires duration_s (number or list)");
        if (s.at("duration_s").is_array()) {
            for (const auto& d : s.at("duration_s")) {
                if (!d.is_number())
                    throw ConfigError("config: schedule.duration_s entries must be numbers");
                cfg.durations.push_back(d.get<double>());
            }
            if (cfg.durations.empty())
                throw ConfigError("config: schedule.duration_s list is empty");
        } else {
            cfg.durations.push_back(get_num(s, "duration_s", 0.0, true));
        }
        for (double d : cfg.durations)
            if (d < 0.0) throw ConfigError("config: schedule durations must be >= 0");

        const std::string ramp = s.value("ramp", "coupling");
        if (ramp == "coupling") {
            cfg.ramp = RampKind::coupling;
        } else if (ramp == "detuning") {
            cfg.ramp = RampKind::detuning;
            cfg.delta_b_final = detail::get_hz(s, "delta_b_final_hz", 0.0, true);
        } else {
            throw ConfigError("config: schedule.ramp must be 'coupling' or 'detuning'");
        }
        if (cfg.ion) {
            cfg.g_final = 0.5 * cfg.ion->eta * cfg.ion->omega_r;
        } else {
            cfg.g_final = detail::get_hz(s, "g_final_hz", cfg.qrm->g / two_pi);
        }
        if (cfg.g_final == 0.0)
            throw ConfigError("config: adiabatic requires a nonzero final coupling");
    }

    if (experiment == "regime-map") {
        if (!j.contains("grid"))
            throw ConfigError("config: regime-map requires a 'grid' block");
        cfg.grid_omega0 = detail::parse_range(j.at("grid"), "omega0_over_g");
        cfg.grid_omega = detail::parse_range(j.at("grid"), "omega_over_g");
        if (j.contains("thresholds")) {
            const json& t = j.at("thresholds");
            cfg.thresholds.much_less = get_num(t, "much_less", 0.1);
            cfg.thresholds.transition_band = get_num(t, "transition_band", 0.2);
        }
        try {
            cfg.thresholds.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        cfg.output_path = o.value("path", "");
        cfg.output_format = o.value("format", "csv");
    }
    if (over.output_path) cfg.output_path = *over.output_path;
    if (over.output_format) cfg.output_format = *over.output_format;
    if (cfg.output_path.empty())
        throw ConfigError("config: output path missing (output.path or --output)");
    if (cfg.output_format != "csv" && cfg.output_format != "json")
        throw ConfigError("config: output format must be 'csv' or 'json'");

    cfg.jobs = int(get_num(j, "jobs", 1.0));
    if (over.jobs) cfg.jobs = *over.jobs;
    if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");

    // echo of the fully resolved configuration (all defaults materialized)
    json r;
    r["experiment"] = cfg.experiment;
    if (cfg.ion) {
        r["ion"] = {{"nu_hz", cfg.ion->nu / two_pi},
                    {"eta", cfg.ion->eta},
                    {"omega_r_hz", cfg.ion->omega_r / two_pi},
                    {"omega_b_hz", cfg.ion->omega_b / two_pi},
                    {"delta_r_hz", cfg.ion->delta_r / two_pi},
                    {"delta_b_hz", cfg.ion->delta_b / two_pi},
                    {"phi_r", cfg.ion->phi_r},
                    {"phi_b", cfg.ion->phi_b}};
    }
    if (cfg.qrm) {
        r["qrm"] = {{"omega0_hz", cfg.qrm->omega0_R / two_pi},
                    {"omega_hz", cfg.qrm->omega_R / two_pi},
                    {"g_hz", cfg.qrm->g / two_pi}};
    }
    r["space"] = {{"fock_cutoff", cfg.fock_cutoff}};
    r["evolution"] = {{"t_final_s", cfg.evolution.t_final},
                      {"dt_s", cfg.evolution.dt},
                      {"steps_per_period", cfg.evolution.steps_per_period},
                      {"snapshot_stride", cfg.evolution.snapshot_stride},
                      {"method", cfg.evolution.method == Integrator::rk4
                                     ? "rk4"
                                     : (cfg.evolution.method == Integrator::static_expm
                                            ? "static_expm"
                                            : "magnus2")}};
    if (cfg.experiment == "evolve")
        r["initial"] = {{"qubit", cfg.initial_qubit == 1 ? "e" : "g"},
                        {"n", cfg.initial_n}};
    if (cfg.experiment == "jc-validate")
        r["window_oscillations"] = cfg.window_oscillations;
    if (cfg.experiment == "adiabatic") {
        r["schedule"] = {{"duration_s", cfg.durations},
                         {"g_final_hz", cfg.g_final / two_pi},
                         {"ramp", cfg.ramp == RampKind::coupling ? "coupling" : "detuning"}};
        if (cfg.ramp == RampKind::detuning)
            r["schedule"]["delta_b_final_hz"] = cfg.delta_b_final / two_pi;
    }
    if (cfg.experiment == "regime-map") {
        r["grid"] = {{"omega0_over_g",
                      {{"min", cfg.grid_omega0.min},
                       {"max", cfg.grid_omega0.max},
                       {"points", cfg.grid_omega0.points}}},
                     {"omega_over_g",
                      {{"min", cfg.grid_omega.min},
                       {"max", cfg.grid_omega.max},
                       {"points", cfg.grid_omega.points}}}};
        r["thresholds"] = {{"much_less", cfg.thresholds.much_less},
                           {"transition_band", cfg.thresholds.transition_band}};
    }
    r["output"] = {{"path", cfg.output_path}, {"format", cfg.output_format}};
    r["jobs"] = cfg.jobs;
    r["units_note"] = "fields ending in _hz are plain frequencies; x2pi applied internally";
    cfg.resolved = std::move(r);
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path,
                                    const std::string& experiment,
                                    const CliOverrides& over = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    return parse_config(j, experiment, over);
}

// ---------------------------------------------------------------------------
// output writing

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline void write_result(const ExperimentConfig& cfg, const ResultTable& table) {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file '" + cfg.output_path + "'");
    if (cfg.output_format == "csv") {
        out << "# schema_version = " << schema_version << "\n";
        out << "# config = " << cfg.resolved.dump() << "\n";
        for (const auto& [k, v] : table.metadata) out << "# " << k << " = " << v << "\n";
        for (size_t i = 0; i < table.columns.size(); ++i)
            out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
        for (const auto& row : table.rows)
            for (size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "\n");
    } else {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["config"] = cfg.resolved;
        for (const auto& [k, v] : table.metadata) j["metadata"][k] = v;
        j["columns"] = table.columns;
        j["rows"] = table.rows;
        out << j.dump(2) << "\n";
    }
    if (!out) throw std::runtime_error("write failed for '" + cfg.output_path + "'");
}

// ---------------------------------------------------------------------------
// analytic Jaynes-Cummings reference

/// Closed-form JC evolution within the {|e,n>, |g,n+1>} doublet (Schroedinger
/// picture of the effective model). start_excited selects |e,n> as psi(0),
/// otherwise |g,n+1>.
inline StateVector analytic_jc_doublet(const QRMParams& p, const HilbertSpace& space,
                                       int n, bool start_excited, double t) {
    if (n < 0 || n + 1 > space.fock_cutoff)
        throw std::invalid_argument("analytic_jc_doublet: doublet outside cutoff");
    const double e1 = 0.5 * p.omega0_R + n * p.omega_R;        // |e,n>
    const double e2 = -0.5 * p.omega0_R + (n + 1) * p.omega_R; // |g,n+1>
    const double mean = 0.5 * (e1 + e2);
    const double half_det = 0.5 * (e1 - e2);
    const double rabi = p.g * std::sqrt(double(n + 1));
    const double lambda = std::hypot(half_det, rabi);

    // exp(-i t M) on the doublet, M = [[half_det, i rabi], [-i rabi, -half_det]]
    Eigen::Matrix2cd u;
    if (lambda == 0.0) {
        u = Eigen::Matrix2cd::Identity();
    } else {
        Eigen::Matrix2cd m;
        m << half_det, I_UNIT * rabi, -I_UNIT * rabi, -half_det;
        u = std::cos(lambda * t) * Eigen::Matrix2cd::Identity() -
            I_UNIT * (std::sin(lambda * t) / lambda) * m;
    }
    const Eigen::Vector2cd psi0 = start_excited ? Eigen::Vector2cd(1.0, 0.0)
                                                : Eigen::Vector2cd(0.0, 1.0);
    const Eigen::Vector2cd psi = std::exp(-I_UNIT * mean * t) * (u * psi0);

    Vector v = Vector::Zero(space.total_dim());
    v(space.index(1, n)) = psi(0);
    v(space.index(0, n + 1)) = psi(1);
    return StateVector{space, std::move(v)};
}

// ---------------------------------------------------------------------------
// experiment runners

namespace detail {

inline void run_jobs(int jobs, int count, const std::function<void(int)>& work) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nthreads = std::min(jobs, count);
    std::vector<std::exception_ptr> errors(static_cast<size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
            } catch (...) {
                errors[size_t(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline QRMParams effective_params(const ExperimentConfig& cfg) {
    if (cfg.qrm) return *cfg.qrm;
    return qrm_params_from_detunings(*cfg.ion);
}

}  // namespace detail

inline ResultTable run_evolve(const ExperimentConfig& cfg) {
    const HilbertSpace space = make_space(cfg.fock_cutoff);
    const StateVector psi0 = basis_state(space, cfg.initial_qubit, cfg.initial_n);

    Trajectory traj;
    if (cfg.ion) {
        traj = evolve(build_ion_interaction(*cfg.ion, space), psi0, cfg.evolution);
    } else {
        traj = evolve(build_qrm(*cfg.qrm, space), psi0, cfg.evolution);
    }

    const std::vector<Operator> ops = {operator_factory(space, OpKind::sigma_z),
                                       operator_factory(space, OpKind::number),
                                       parity_operator(space)};
    const auto table = observable_series(traj, ops, {"sigma_z", "n", "parity"});

    ResultTable out;
    out.metadata.push_back({"norm_drift", detail::fmt(traj.norm_drift)});
    out.columns = {"t_s", "norm2", "sigma_z", "n", "parity", "p_e"};
    for (size_t i = 0; i < traj.states.size(); ++i) {
        const double nrm = traj.states[i].amplitudes.norm();
        const double nrm2 = nrm * nrm;
        const double sz = table.values(long(i), 0);
        out.rows.push_back({detail::fmt(traj.times[i]), detail::fmt(nrm2),
                            detail::fmt(sz), detail::fmt(table.values(long(i), 1)),
                            detail::fmt(table.values(long(i), 2)),
                            detail::fmt(0.5 * (1.0 + sz))});
    }
    return out;
}

inline ResultTable run_jc_validate(const ExperimentConfig& cfg) {
    const HilbertSpace space = make_space(cfg.fock_cutoff);
    const QRMParams qrm = qrm_params_from_detunings(*cfg.ion);
    if (qrm.g == 0.0) throw ConfigError("jc-validate: effective coupling g is zero");

    // one full Rabi oscillation of the n=0 doublet takes pi/g on resonance
    EvolutionConfig evo = cfg.evolution;
    evo.t_final = cfg.window_oscillations * std::numbers::pi / std::abs(qrm.g);
    if (cfg.evolution.snapshot_stride == 1) evo.snapshot_stride = 200;

    const TimeDependentHamiltonian h = build_ion_interaction(*cfg.ion, space);
    const FrameSpec frame = qrm_interaction_frame(qrm);

    const std::vector<std::pair<int, bool>> starts = {{1, 1}, {0, 0}};  // |e,0>, |g,1>
    std::vector<std::vector<double>> fids(2);
    std::vector<double> times;
    for (size_t s = 0; s < starts.size(); ++s) {
        const StateVector psi0 =
            basis_state(space, starts[s].first, starts[s].second ? 0 : 1);
        const Trajectory traj = evolve(h, psi0, evo);
        if (traj.norm_drift > 1e-7)
            throw NumericalError("jc-validate: norm drift " +
                                 detail::fmt(traj.norm_drift) + " exceeds 1e-7");
        if (s == 0) times = traj.times;
        for (size_t i = 0; i < traj.states.size(); ++i) {
            const StateVector ref = to_frame(
                analytic_jc_doublet(qrm, space, 0, starts[s].second, traj.times[i]),
                traj.times[i], frame);
            fids[s].push_back(fidelity(traj.states[i], ref));
        }
    }

    double fmin = 1.0, fsum = 0.0;
    size_t count = 0;
    for (const auto& col : fids)
        for (double f : col) {
            fmin = std::min(fmin, f);
            fsum += f;
            ++count;
        }

    ResultTable out;
    out.metadata.push_back({"min_fidelity", detail::fmt(fmin)});
    out.metadata.push_back({"mean_fidelity", detail::fmt(fsum / double(count))});
    out.metadata.push_back({"g_over_omega", detail::fmt(qrm.g / qrm.omega_R)});
    out.columns = {"t_s", "fidelity_e0", "fidelity_g1"};
    for (size_t i = 0; i < times.size(); ++i)
        out.rows.push_back({detail::fmt(times[i]), detail::fmt(fids[0][i]),
                            detail::fmt(fids[1][i])});
    return out;
}

inline ResultTable run_ground_state(const ExperimentConfig& cfg) {
    const QRMParams qrm = detail::effective_params(cfg);
    const HilbertSpace space = make_space(cfg.fock_cutoff);
    const auto [energy, gs] = ground_state(build_qrm(qrm, space));

    // cutoff convergence check at N+10
    const HilbertSpace big = make_space(cfg.fock_cutoff + 10);
    const auto [energy_big, gs_big] = ground_state(build_qrm(qrm, big));
    const double n_small =
        expectation(gs, operator_factory(space, OpKind::number)).real();
    const double n_big =
        expectation(gs_big, operator_factory(big, OpKind::number)).real();
    const double scale = std::max({std::abs(qrm.omega_R), std::abs(qrm.omega0_R),
                                   std::abs(qrm.g), 1.0});
    if (std::abs(energy - energy_big) > 1e-8 * scale ||
        std::abs(n_small - n_big) > 1e-8)
        throw NumericalError("ground-state: cutoff non-convergence at N = " +
                             std::to_string(cfg.fock_cutoff));

    const auto report = parity_analysis(gs);
    ResultTable out;
    out.metadata.push_back({"energy_rad_s", detail::fmt(energy)});
    out.metadata.push_back({"n_expect", detail::fmt(n_small)});
    out.metadata.push_back(
        {"sigma_z", detail::fmt(expectation(gs, operator_factory(space, OpKind::sigma_z)).real())});
    out.metadata.push_back({"parity", detail::fmt(report.parity_expectation)});
    out.metadata.push_back({"even_chain_population",
                            detail::fmt(chain_population(report.even_chain))});
    out.metadata.push_back({"odd_chain_population",
                            detail::fmt(chain_population(report.odd_chain))});
    out.columns = {"label", "qubit", "n", "parity", "population"};
    auto emit = [&](const std::vector<ChainEntry>& chain) {
        for (const auto& e : chain)
            // labels contain the separator, so they are quoted
            out.rows.push_back({"\"" + std::string(e.qubit == 1 ? "e" : "g") + "," +
                                    std::to_string(e.n) + "\"",
                                e.qubit == 1 ? "e" : "g", std::to_string(e.n),
                                detail::fmt(e.parity), detail::fmt(e.population)});
    };
    emit(report.even_chain);
    emit(report.odd_chain);
    return out;
}

inline SweepSchedule make_schedule(const ExperimentConfig& cfg, double duration) {
    const QRMParams qrm = detail::effective_params(cfg);
    SweepSchedule s;
    s.duration = duration;
    s.g_final = cfg.g_final != 0.0 ? cfg.g_final : qrm.g;
    s.ramp = cfg.ramp;
    s.omega0_R = qrm.omega0_R;
    s.omega_R = qrm.omega_R;
    if (cfg.ramp == RampKind::detuning) {
        s.delta_b_start = detunings_from_qrm(qrm).delta_b;
        s.delta_b_final = cfg.delta_b_final;
    }
    return s;
}

inline ResultTable run_adiabatic(const ExperimentConfig& cfg) {
    const HilbertSpace space = make_space(cfg.fock_cutoff);

    std::vector<SweepResult> results(cfg.durations.size());
    detail::run_jobs(cfg.jobs, int(cfg.durations.size()), [&](int i) {
        results[size_t(i)] =
            adiabatic_sweep(make_schedule(cfg, cfg.durations[size_t(i)]), space,
                            cfg.evolution);
    });
    for (const auto& r : results)
        if (r.trajectory.norm_drift > 1e-7)
            throw NumericalError("adiabatic: norm drift " +
                                 detail::fmt(r.trajectory.norm_drift) +
                                 " exceeds 1e-7");

    ResultTable out;
    if (cfg.durations.size() == 1) {
        out.metadata.push_back(
            {"final_fidelity", detail::fmt(results[0].final_fidelity)});
        out.metadata.push_back(
            {"norm_drift", detail::fmt(results[0].trajectory.norm_drift)});
        out.columns = {"t_s", "fidelity"};
        for (const auto& pt : results[0].curve.points)
            out.rows.push_back({detail::fmt(pt.t), detail::fmt(pt.fidelity)});
    } else {
        out.columns = {"duration_s", "final_fidelity"};
        for (size_t i = 0; i < cfg.durations.size(); ++i)
            out.rows.push_back({detail::fmt(cfg.durations[i]),
                                detail::fmt(results[i].final_fidelity)});
    }
    return out;
}

inline ResultTable run_regime_map(const ExperimentConfig& cfg) {
    const int rows = cfg.grid_omega0.points;
    const int cols = cfg.grid_omega.points;
    std::vector<RegimeLabel> labels(size_t(rows) * size_t(cols));
    detail::run_jobs(cfg.jobs, rows, [&](int i) {
        for (int jj = 0; jj < cols; ++jj) {
            QRMParams p{cfg.grid_omega0.at(i), cfg.grid_omega.at(jj), 1.0};
            labels[size_t(i) * size_t(cols) + size_t(jj)] = classify(p, cfg.thresholds);
        }
    });

    ResultTable out;
    out.columns = {"omega0_R", "omega_R", "g", "label"};
    for (int i = 0; i < rows; ++i)
        for (int jj = 0; jj < cols; ++jj)
            out.rows.push_back({detail::fmt(cfg.grid_omega0.at(i)),
                                detail::fmt(cfg.grid_omega.at(jj)), "1",
                                "\"" + labels[size_t(i) * size_t(cols) + size_t(jj)]
                                          .to_string() + "\""});
    return out;
}

/// Runs the configured experiment and writes its output file.
inline void run_experiment(const ExperimentConfig& cfg) {
    ResultTable table;
    if (cfg.experiment == "evolve") table = run_evolve(cfg);
    else if (cfg.experiment == "jc-validate") table = run_jc_validate(cfg);
    else if (cfg.experiment == "ground-state") table = run_ground_state(cfg);
    else if (cfg.experiment == "adiabatic") table = run_adiabatic(cfg);
    else if (cfg.experiment == "regime-map") table = run_regime_map(cfg);
    else throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    write_result(cfg, table);
}

}  // namespace qrmsim

#endif
