// lmgsim: command-line driver for the hybrid-device -> LMG pipeline, the
// semiclassical phase diagrams, the bosonic squeezing dynamics, and the
// exact Dicke-sector evolution.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include "CLI11.hpp"

#include <chrono>
#include <iostream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include "lmg/config.hpp"
#include "lmg/dicke.hpp"
#include "lmg/hpboson.hpp"
#include "lmg/io.hpp"
#include "lmg/lmgmap.hpp"
#include "lmg/semiclassical.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

lmg::json provenance(const lmg::Config& cfg) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    lmg::json j;
    j["unix_time_s"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    j["config"] = cfg.flat();
    return j;
}

void emit(const std::string& out_path, const std::string& content, const lmg::Config& cfg) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    lmg::write_file_atomic(out_path, content);
    lmg::write_file_atomic(out_path + ".run.json", provenance(cfg).dump(2) + "\n");
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1)
        throw lmg::ConfigError("grid needs at least 1 step");
    std::vector<double> v;
    v.reserve(steps);
    if (steps == 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < steps; ++i)
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
    return v;
}

// Device parameters either from a preset or from an explicit [device]
// section with per-channel subkeys.
lmg::PhysicalDeviceParams device_from_config(const lmg::Config& cfg) {
    if (cfg.has("device", "preset")) {
        return lmg::table1_preset(lmg::parse_variant(cfg.get_string("device", "preset")),
                                  cfg.get_number("device", "n_spins"),
                                  cfg.get_number("device", "kappa"),
                                  cfg.get_number_or("device", "gamma_dep", 0.0),
                                  cfg.get_optional_number("device", "delta_b"));
    }
    lmg::PhysicalDeviceParams p;
    p.n_spins = cfg.get_number("device", "n_spins");
    const bool collective = cfg.has("device", "g_collective_1");
    for (int k = 0; k < 4; ++k) {
        const std::string idx = std::to_string(k + 1);
        if (collective)
            p.g_collective[k] = cfg.get_number("device", "g_collective_" + idx);
        else
            p.g[k] = cfg.get_number("device", "g_" + idx);
        const double mag = cfg.get_number("device", "omega_" + idx + "_mag");
        const double phase = cfg.get_number_or("device", "omega_" + idx + "_phase", 0.0);
        p.omega_rabi[k] = std::polar(mag, phase);
    }
    p.delta = {cfg.get_number("device", "delta_a1"), cfg.get_number("device", "delta_a2"),
               cfg.get_number("device", "delta_b1"), cfg.get_number("device", "delta_b2")};
    p.kappa = {cfg.get_number("device", "kappa_a"), cfg.get_number("device", "kappa_b")};
    p.gamma_dep = cfg.get_number_or("device", "gamma_dep", 0.0);
    p.delta_b = cfg.get_optional_number("device", "delta_b");
    p.finalize(collective);
    return p;
}

int cmd_params(const lmg::Config& cfg, const std::string& out_path) {
    const auto device = device_from_config(cfg);
    const auto pipe = lmg::device_to_lmg(device);
    lmg::json j;
    j["effective_raman"] = lmg::to_json(pipe.raman);
    j["lmg"] = lmg::to_json(pipe.lmg);
    j["variant"] = lmg::variant_name(lmg::classify_variant(pipe.lmg));
    j["lambda_a"] = pipe.elim_a.lambda_like;
    j["lambda_b"] = pipe.elim_b.lambda_like;
    j["warnings"] = lmg::json::array();
    for (const auto& w : pipe.warnings)
        j["warnings"].push_back(lmg::to_json(w));
    emit(out_path, j.dump(2) + "\n", cfg);
    return 0;
}

int cmd_phase_sweep(const lmg::Config& cfg, const std::string& out_path,
                    lmg::SteadyMode mode, unsigned threads) {
    lmg::SweepGrid g;
    g.h = cfg.get_number_or("sweep", "h", 1.0);
    g.lambda_values = linspace(cfg.get_number("sweep", "lambda_min"),
                               cfg.get_number("sweep", "lambda_max"),
                               static_cast<int>(cfg.get_number("sweep", "lambda_steps")));
    const std::string axis = cfg.get_string_or("sweep", "axis", "gamma_b");
    if (axis == "gamma_b")
        g.second_axis = lmg::SweepAxis::GammaB;
    else if (axis == "gamma_dep")
        g.second_axis = lmg::SweepAxis::GammaDep;
    else
        throw lmg::ConfigError("sweep.axis must be gamma_b or gamma_dep");
    if (cfg.has("sweep", "second_min")) {
        g.second_values = linspace(cfg.get_number("sweep", "second_min"),
                                   cfg.get_number("sweep", "second_max"),
                                   static_cast<int>(cfg.get_number("sweep", "second_steps")));
    } else {
        g.second_values = {cfg.get_number("sweep", "second_value")};
    }
    g.fixed_gamma_b = cfg.get_number_or("sweep", "gamma_b", 0.0);
    g.fixed_gamma_dep = cfg.get_number_or("sweep", "gamma_dep", 0.0);

    const auto points = lmg::sweep_phase_diagram(g, mode, threads);
    emit(out_path, lmg::phase_sweep_csv(points), cfg);
    return 0;
}

int cmd_squeeze(const lmg::Config& cfg, const std::string& out_path, const std::string& solver) {
    lmg::HpParams p;
    p.h = cfg.get_number_or("squeeze", "h", 0.0);
    p.lambda = cfg.get_number("squeeze", "lambda");
    p.gamma_a = cfg.get_number_or("squeeze", "gamma_a", 0.0);
    p.gamma_b = cfg.get_number_or("squeeze", "gamma_b", 0.0);
    p.gamma_dep = cfg.get_number_or("squeeze", "gamma_dep", 0.0);
    const double t_end = cfg.get_number("squeeze", "t_end");
    const double dt = cfg.get_number_or("squeeze", "dt", 1e-4);
    const auto stride = static_cast<std::size_t>(cfg.get_number_or("squeeze", "stride", 100));
    const double n_spins = cfg.get_number_or("squeeze", "n_spins", 0.0);

    std::vector<lmg::SqueezeRow> rows;
    if (solver == "moments") {
        const auto traj = lmg::evolve_moments(lmg::SecondMoments{}, p, t_end, dt, stride);
        if (traj.aborted) {
            std::cerr << "lmgsim: moment integration aborted (physicality) at t = "
                      << traj.abort_time << "; reduce dt\n";
            return kExitNumerical;
        }
        for (const auto& s : traj.samples) {
            const auto sq = lmg::hp_squeezing(s.s, n_spins);
            rows.push_back({s.t, s.s, sq.result.xi2, sq.result.xi2_db, "moments"});
        }
    } else if (solver == "fock") {
        const int n_max = static_cast<int>(cfg.get_number_or("squeeze", "n_max", 60));
        const auto traj =
            lmg::evolve_fock(lmg::fock_vacuum(n_max), p, t_end, dt, stride);
        if (traj.aborted) {
            std::cerr << "lmgsim: Fock truncation health violated at t = " << traj.abort_time
                      << "; raise n_max (currently " << n_max << ")\n";
            return kExitNumerical;
        }
        for (const auto& s : traj.samples) {
            const auto sq = lmg::hp_squeezing(s.s, n_spins);
            rows.push_back({s.t, s.s, sq.result.xi2, sq.result.xi2_db, "fock"});
        }
    } else {
        throw lmg::ConfigError("solver must be moments or fock");
    }
    emit(out_path, lmg::squeeze_csv(rows), cfg);
    return 0;
}

int cmd_evolve_dicke(const lmg::Config& cfg, const std::string& out_path) {
    const int n = static_cast<int>(cfg.get_number("dicke", "n_spins"));
    const auto variant = lmg::parse_variant(cfg.get_string("dicke", "variant"));
    lmg::LmgParams p;
    p.n_spins = n;
    p.h = cfg.get_number("dicke", "h");
    p.lambda = cfg.get_number("dicke", "lambda");
    switch (variant) {
        case lmg::LmgVariant::TwoAxis: p.chi = -1.0; break;
        case lmg::LmgVariant::Isotropic: p.chi = 1.0; break;
        default: p.chi = 0.0; break;
    }
    p.gamma_a = cfg.get_number_or("dicke", "gamma_a", 0.0);
    p.gamma_b = cfg.get_number_or("dicke", "gamma_b", 0.0);
    p.gamma_dep = cfg.get_number_or("dicke", "gamma_dep", 0.0);

    const auto ops = lmg::build_operators(n);
    const auto h = lmg::build_lmg_hamiltonian(ops, p);
    const auto channels =
        lmg::variant_dissipators(ops, variant, p.gamma_a, p.gamma_b, p.gamma_dep);
    const auto rho0 = lmg::coherent_spin_state(ops, cfg.get_number_or("dicke", "theta0", 0.0),
                                               cfg.get_number_or("dicke", "phi0", 0.0));
    lmg::EvolveOptions opt;
    opt.dt = cfg.get_number_or("dicke", "dt", 1e-3);
    opt.step_safety = cfg.get_number_or("dicke", "step_safety", 0.01);
    opt.record_stride = static_cast<std::size_t>(cfg.get_number_or("dicke", "stride", 100));
    const auto traj =
        lmg::evolve_master(rho0, h, channels, ops, cfg.get_number("dicke", "t_end"), opt);
    if (traj.aborted) {
        std::cerr << "lmgsim: master-equation run aborted: " << traj.abort_reason << "\n";
        return kExitNumerical;
    }
    emit(out_path, lmg::expectation_csv(traj.samples), cfg);
    return 0;
}

// Command-line flags override the config file.
void apply_override(lmg::Config& cfg, const std::string& section, const std::string& key,
                    const std::optional<double>& v) {
    if (v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << *v;
        cfg.set(section, key, ss.str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LMG-model simulator for a driven NV-ensemble / cavity device"};
    app.require_subcommand(1);

    std::string config_path, out_path, mode_str = "paper", solver = "moments";
    unsigned threads = 1;
    app.add_option("--config", config_path, "run configuration file (INI-style)");
    app.add_option("--out", out_path, "output path (stdout when omitted)");
    app.add_option("--mode", mode_str, "steady-state mode: paper|oracle")
        ->check(CLI::IsMember({"paper", "oracle"}));
    app.add_option("--solver", solver, "squeeze solver: moments|fock")
        ->check(CLI::IsMember({"moments", "fock"}));
    app.add_option("--threads", threads, "worker threads for sweeps");

    auto* sc_params = app.add_subcommand("params", "device -> effective -> LMG parameter chain");
    sc_params->fallthrough(); // global flags may trail the subcommand
    std::string preset;
    std::optional<double> opt_n, opt_kappa, opt_gdep, opt_db;
    sc_params->add_option("--preset", preset, "two-axis|isotropic|one-axis");
    sc_params->add_option("--n", opt_n, "number of spins N");
    sc_params->add_option("--kappa", opt_kappa, "cavity decay rate");
    sc_params->add_option("--gamma-dep", opt_gdep, "collective dephasing rate");
    sc_params->add_option("--delta-b", opt_db, "Zeeman splitting (regime checks)");

    auto* sc_sweep = app.add_subcommand("phase-sweep", "semiclassical steady-state sweep CSV");
    sc_sweep->fallthrough();
    auto* sc_squeeze = app.add_subcommand("squeeze", "bosonic squeezing time series CSV");
    sc_squeeze->fallthrough();
    auto* sc_dicke = app.add_subcommand("evolve-dicke", "exact Dicke-sector evolution CSV");
    sc_dicke->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        lmg::Config cfg = config_path.empty() ? lmg::Config{}
                                              : lmg::Config::parse_file(config_path);
        if (sc_params->parsed()) {
            if (!preset.empty())
                cfg.set("device", "preset", preset);
            apply_override(cfg, "device", "n_spins", opt_n);
            apply_override(cfg, "device", "kappa", opt_kappa);
            apply_override(cfg, "device", "gamma_dep", opt_gdep);
            apply_override(cfg, "device", "delta_b", opt_db);
            return cmd_params(cfg, out_path);
        }
        if (sc_sweep->parsed()) {
            const auto mode = mode_str == "oracle" ? lmg::SteadyMode::Oracle
                                                   : lmg::SteadyMode::Paper;
            return cmd_phase_sweep(cfg, out_path, mode, threads);
        }
        if (sc_squeeze->parsed())
            return cmd_squeeze(cfg, out_path, solver);
        if (sc_dicke->parsed())
            return cmd_evolve_dicke(cfg, out_path);
    } catch (const lmg::ConfigError& e) {
        std::cerr << "lmgsim: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "lmgsim: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "lmgsim: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
