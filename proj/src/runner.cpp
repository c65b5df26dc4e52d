#include "nslab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace nslab {

void build_inputs(const RunConfig& cfg, Grid& grid, DensityProfile& profile,
                  InitialData& initial) {
    cfg.physics.validate();
    cfg.control.validate();
    grid = make_grid(cfg.L, cfg.N, cfg.buffer_fraction);
    const int n = grid.size();

    std::vector<double> table_v0;
    if (cfg.profile_family == "power_law") {
        profile = density_power_law(cfg.K_rho, cfg.ell_rho, grid);
    } else {
        profile = density_from_table(cfg.table_path, grid, &table_v0);
    }

    initial = InitialData{};
    initial.J0.assign(n, cfg.J0_const);
    if (cfg.v0_family == "bump") {
        bump_velocity(cfg.v0_amplitude, cfg.v0_width, grid, initial);
    } else if (cfg.v0_family == "zero") {
        initial.v0.assign(n, 0.0);
        initial.dv0 = std::vector<double>(n, 0.0);
    } else { // table
        if (table_v0.empty()) {
            throw ConfigError("initial.v0_family = table requires a 3-column profile table");
        }
        initial.v0 = table_v0;
    }
    std::vector<double> s0(n, cfg.s0_const);
    theta_from_entropy(s0, profile, cfg.physics, initial);
    initial.record_J_bounds();
}

RunResult run_experiment(const RunConfig& cfg) {
    RunResult r;
    r.cfg = cfg;
    r.hash = config_hash(cfg);
    build_inputs(cfg, r.grid, r.profile, r.initial);
    r.decay = decay_constants(r.profile, r.grid);
    r.assumptions = check_assumptions(r.profile, r.initial, r.grid, cfg.physics);
    if (r.assumptions.hard_reject) {
        r.vacuum_reject = true;
        return r;
    }

    const Grid& grid = r.grid;
    const DensityProfile& profile = r.profile;
    const PhysParams& pp = cfg.physics;
    const int n = grid.size();
    const double gam = pp.gamma();

    SolverSetup setup = make_setup(pp, profile, grid, r.initial);
    SimState init;
    init.t = 0.0;
    init.J = r.initial.J0;
    init.v = r.initial.v0;
    init.theta = r.initial.theta0;

    r.E0 = total_energy(init, profile, grid, pp);
    r.rho_mass = trapz(grid.h, profile.rho0);
    r.B_bracket = std::exp(2.0 * std::sqrt(2.0) / pp.mu * std::sqrt(r.rho_mass * r.E0));
    r.J_floor = r.initial.J_lower / r.B_bracket;
    r.B_min = std::numeric_limits<double>::infinity();
    r.B_max = -std::numeric_limits<double>::infinity();
    r.J_min = std::numeric_limits<double>::infinity();
    r.J_max = -std::numeric_limits<double>::infinity();

    std::vector<double> wtheta(n); // rho0^{1-gamma}
    for (int i = 0; i < n; ++i) wtheta[i] = std::pow(profile.rho0[i], 1.0 - gam);

    JIdentityAccumulator acc(r.initial, profile, grid, pp);
    WeightedNorms norms;
    double prev_flux = boundary_heat_flux(init, grid, pp);

    auto record = [&](const SimState& state, double dt) {
        std::vector<double> G = viscous_flux(state, profile, grid, pp);
        norms.update(state, G, profile, grid, pp, dt);
        auto jid = acc.evaluate(state);
        EntropyField ent = entropy_field(state, profile, grid, pp);

        DiagnosticsRecord rec;
        rec.t = state.t;
        rec.dt = dt;
        rec.E_total = total_energy(state, profile, grid, pp);
        rec.G = std::move(G);
        rec.J_residual = jid.J_residual;
        rec.s_min = ent.s_min.value_or(std::numeric_limits<double>::quiet_NaN());
        rec.s_max = ent.s_max.value_or(std::numeric_limits<double>::quiet_NaN());
        rec.masked_nodes = ent.masked_count;
        double tw = 0.0;
        for (int i = 0; i < n; ++i) tw = std::max(tw, state.theta[i] * wtheta[i]);
        rec.theta_max_weighted = tw;
        for (double b : jid.B) {
            r.B_min = std::min(r.B_min, b);
            r.B_max = std::max(r.B_max, b);
        }
        for (double j : state.J) {
            r.J_min = std::min(r.J_min, j);
            r.J_max = std::max(r.J_max, j);
        }
        double flux = boundary_heat_flux(state, grid, pp);
        r.boundary_flux_integral += 0.5 * dt * (prev_flux + flux);
        prev_flux = flux;
        if (r.E0 > 0.0) {
            r.max_energy_drift = std::max(
                r.max_energy_drift,
                std::abs(rec.E_total - r.E0 - r.boundary_flux_integral) / r.E0);
            r.max_energy_drift_raw =
                std::max(r.max_energy_drift_raw, std::abs(rec.E_total - r.E0) / r.E0);
        }
        r.max_J_residual = std::max(r.max_J_residual, jid.J_residual);
        r.tail_bound_final = jid.tail_bound;
        rec.B = std::move(jid.B);
        r.series.push_back(std::move(rec));
        r.ZJ_series.push_back(norms.ZJ());
        r.Zt_series.push_back(norms.Ztheta());
        r.ZG_series.push_back(norms.ZG());
    };

    r.states.push_back(init);
    record(init, 0.0);

    StepObserver obs = [&](const SimState& prev, const SimState& next, double dt) {
        acc.update(prev, next, dt);
        r.states.push_back(next);
        record(next, dt);
    };
    std::vector<double> out_times = cfg.snapshots;
    if (out_times.empty()) out_times = {0.0, cfg.T};
    Trajectory traj = run_simulation(r.initial, setup, cfg.control, cfg.T, out_times, {obs});
    r.retries = traj.retries;

    // map output times onto the stored history
    const double ttol = 1e-12 * (1.0 + cfg.T);
    std::sort(out_times.begin(), out_times.end());
    for (double tau : out_times) {
        for (std::size_t k = 0; k < r.states.size(); ++k) {
            if (std::abs(r.states[k].t - tau) <= ttol) {
                if (r.snapshot_rows.empty() || r.snapshot_rows.back() != k) {
                    r.snapshot_rows.push_back(k);
                }
                break;
            }
        }
    }

    // second pass: drift constants need min J over the whole horizon
    r.levels = entropy_level_params(r.initial, r.decay, r.J_min, r.J_max, pp);
    r.ladder = LevelSetLadder::with_default_levels(r.levels.ell_lower0, r.levels.ell_upper0,
                                                   cfg.ladder_count, cfg.ladder_lower_span,
                                                   cfg.ladder_upper_span_factor);
    std::size_t snap = 0;
    for (std::size_t k = 0; k < r.states.size(); ++k) {
        const SimState& st = r.states[k];
        double dt = (k == 0) ? 0.0 : st.t - r.states[k - 1].t;
        RegularizedEntropy reg =
            regularized_entropy(st, profile, pp, cfg.epsilon, r.levels.M_lower);
        r.ladder.update(reg, st, profile, grid, pp, dt, r.levels.M_upper);
        if (snap < r.snapshot_rows.size() && r.snapshot_rows[snap] == k) {
            r.ladder_times.push_back(st.t);
            r.q_at_times.push_back(r.ladder.q());
            r.Q_at_times.push_back(r.ladder.Q());
            ++snap;
        }
    }
    r.q_vanish = vanishing_level(r.ladder.levels_lower(), r.ladder.q(),
                                 LadderOrientation::NondecreasingInLevel);
    r.Q_vanish = vanishing_level(r.ladder.levels_upper(), r.ladder.Q(),
                                 LadderOrientation::NonincreasingInLevel);
    if (norms.ZJ() > 0.0) {
        r.q_fit = fit_recursion_constant(r.ladder.levels_lower(), r.ladder.q(), norms.ZJ(),
                                         LadderOrientation::NondecreasingInLevel);
        r.Q_fit = fit_recursion_constant(r.ladder.levels_upper(), r.ladder.Q(), norms.ZJ(),
                                         LadderOrientation::NonincreasingInLevel);
    }
    return r;
}

namespace {

const char* status_name(AssumptionStatus s) {
    switch (s) {
        case AssumptionStatus::Pass: return "pass";
        case AssumptionStatus::Diverging: return "diverging";
        default: return "fail";
    }
}

nlohmann::json opt_json(const std::optional<double>& x) {
    if (!x) return nullptr;
    return *x;
}

} // namespace

std::string summary_json_text(const RunResult& r) {
    nlohmann::json j;
    j["config_hash"] = r.hash;
    j["N"] = r.cfg.N;
    j["L"] = r.cfg.L;
    j["T"] = r.cfg.T;
    j["gamma"] = r.cfg.physics.gamma();
    j["ell_rho"] = r.cfg.ell_rho;
    j["vacuum_reject"] = r.vacuum_reject;
    nlohmann::json as = nlohmann::json::array();
    for (const auto& e : r.assumptions.entries) {
        as.push_back({{"name", e.name},
                      {"value", e.value},
                      {"growth_ratio", e.growth_ratio},
                      {"status", status_name(e.status)}});
    }
    j["assumptions"] = as;
    j["decay"] = {{"K1", r.decay.K1},
                  {"K2", r.decay.K2},
                  {"K1_growth", r.decay.K1_growth},
                  {"K2_growth", r.decay.K2_growth}};
    if (!r.vacuum_reject) {
        j["steps"] = r.series.empty() ? 0 : static_cast<long>(r.series.size()) - 1;
        j["retries"] = r.retries;
        j["E0"] = r.E0;
        j["rho_mass"] = r.rho_mass;
        j["max_energy_drift"] = r.max_energy_drift;
        j["max_energy_drift_raw"] = r.max_energy_drift_raw;
        j["boundary_flux_integral"] = r.boundary_flux_integral;
        j["max_J_residual"] = r.max_J_residual;
        j["tail_bound"] = r.tail_bound_final;
        j["B_min"] = r.B_min;
        j["B_max"] = r.B_max;
        j["B_bracket"] = r.B_bracket;
        j["J_min"] = r.J_min;
        j["J_max"] = r.J_max;
        j["J_floor"] = r.J_floor;
        if (!r.series.empty()) {
            const DiagnosticsRecord& last = r.series.back();
            j["s_min_final"] = last.s_min;
            j["s_max_final"] = last.s_max;
            j["masked_nodes_final"] = last.masked_nodes;
            j["theta_max_weighted_final"] = last.theta_max_weighted;
        }
        if (!r.ZJ_series.empty()) {
            j["ZJ"] = r.ZJ_series.back();
            j["Ztheta"] = r.Zt_series.back();
            j["ZG"] = r.ZG_series.back();
        }
        j["ell_lower0"] = r.levels.ell_lower0;
        j["ell_upper0"] = r.levels.ell_upper0;
        j["M_lower"] = r.levels.M_lower;
        j["M_upper"] = r.levels.M_upper;
        j["J_lowerT"] = r.levels.J_lowerT;
        j["J_upperT"] = r.levels.J_upperT;
        j["q_vanishing_level"] = opt_json(r.q_vanish);
        j["Q_vanishing_level"] = opt_json(r.Q_vanish);
        j["recursion_fit"] = {{"certified", false},
                              {"q_C", r.q_fit.C},
                              {"q_pairs", r.q_fit.pairs},
                              {"q_degenerate", r.q_fit.degenerate},
                              {"Q_C", r.Q_fit.C},
                              {"Q_pairs", r.Q_fit.pairs},
                              {"Q_degenerate", r.Q_fit.degenerate}};
    }
    return j.dump(2) + "\n";
}

void write_artifacts(const RunResult& r, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        if (!f) throw DataError("cannot write artifact '" + name + "' in " + out_dir);
        return f;
    };

    {
        auto f = open("summary.json");
        f << summary_json_text(r);
    }
    if (r.vacuum_reject) return;

    {
        auto f = open("diagnostics.csv");
        f << "# config " << r.hash << "\n";
        f << "t,dt,E_total,J_residual,s_min,s_max,ZJ,Ztheta,ZG\n";
        for (std::size_t k = 0; k < r.series.size(); ++k) {
            const DiagnosticsRecord& d = r.series[k];
            f << format_double(d.t) << ',' << format_double(d.dt) << ','
              << format_double(d.E_total) << ',' << format_double(d.J_residual) << ','
              << format_double(d.s_min) << ',' << format_double(d.s_max) << ','
              << format_double(r.ZJ_series[k]) << ',' << format_double(r.Zt_series[k]) << ','
              << format_double(r.ZG_series[k]) << "\n";
        }
    }

    for (std::size_t s = 0; s < r.ladder_times.size(); ++s) {
        const std::string idx = std::to_string(s);
        {
            auto f = open("ladder_q_" + idx + ".csv");
            f << "# config " << r.hash << "\n# t " << format_double(r.ladder_times[s]) << "\n";
            f << "level,q\n";
            const auto& lv = r.ladder.levels_lower();
            for (std::size_t k = 0; k < lv.size(); ++k) {
                f << format_double(lv[k]) << ',' << format_double(r.q_at_times[s][k]) << "\n";
            }
        }
        {
            auto f = open("ladder_Q_" + idx + ".csv");
            f << "# config " << r.hash << "\n# t " << format_double(r.ladder_times[s]) << "\n";
            f << "level,Q\n";
            const auto& lv = r.ladder.levels_upper();
            for (std::size_t k = 0; k < lv.size(); ++k) {
                f << format_double(lv[k]) << ',' << format_double(r.Q_at_times[s][k]) << "\n";
            }
        }
        {
            std::size_t row = r.snapshot_rows[s];
            const SimState& st = r.states[row];
            auto f = open("snapshot_" + idx + ".csv");
            f << "# config " << r.hash << "\n# t " << format_double(st.t) << "\n";
            f << "y,J,v,theta\n";
            for (int i = 0; i < r.grid.size(); ++i) {
                f << format_double(r.grid.nodes[i]) << ',' << format_double(st.J[i]) << ','
                  << format_double(st.v[i]) << ',' << format_double(st.theta[i]) << "\n";
            }
        }
    }
}

} // namespace nslab
