#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/config.hpp"
#include "nslab/degiorgi.hpp"
#include "nslab/diagnostics.hpp"
#include "nslab/profiles.hpp"
#include "nslab/solver.hpp"

namespace nslab {

/// Everything measured along one experiment. The level-set ladders are
/// computed in a second pass over the stored states so that the drift
/// constants can use the exact minimum of J over [0, T].
struct RunResult {
    RunConfig cfg;
    std::string hash;

    Grid grid;
    DensityProfile profile;
    InitialData initial;
    AssumptionReport assumptions;
    DecayConstants decay;

    bool vacuum_reject = false; // interior vacuum: nothing below is populated

    // per accepted step (row 0 is the initial state)
    std::vector<DiagnosticsRecord> series;
    std::vector<double> ZJ_series, Zt_series, ZG_series;

    std::vector<SimState> states; // full history, one per accepted step
    long retries = 0;

    double E0 = 0.0;
    double rho_mass = 0.0;     // ||rho0||_1 on the truncated domain
    double B_bracket = 1.0;    // exp((2 sqrt 2 / mu) sqrt(rho_mass E0))
    double J_floor = 0.0;      // min J0 / B_bracket
    double B_min = 1.0, B_max = 1.0;
    double J_min = 1.0, J_max = 1.0;
    // conservation drift of E(t) - \int boundary heat flux, relative to E0
    double max_energy_drift = 0.0;
    double max_energy_drift_raw = 0.0; // uncorrected |E - E0| / E0
    double boundary_flux_integral = 0.0;
    double max_J_residual = 0.0;
    double tail_bound_final = 0.0;

    EntropyLevelParams levels; // J bounds taken from the run itself
    LevelSetLadder ladder;
    std::vector<double> ladder_times;
    std::vector<std::vector<double>> q_at_times, Q_at_times;
    std::optional<double> q_vanish, Q_vanish;
    RecursionFit q_fit, Q_fit; // exploratory, not certified

    std::vector<std::size_t> snapshot_rows; // indices into states at output times
};

/// Build grid/profile/initial data from a config.
void build_inputs(const RunConfig& cfg, Grid& grid, DensityProfile& profile,
                  InitialData& initial);

/// Full pipeline: assumption check, time integration with diagnostics,
/// post-pass ladders. Throws SolverAbort / NumericalError on failed runs;
/// an interior-vacuum profile returns early with vacuum_reject set.
RunResult run_experiment(const RunConfig& cfg);

/// diagnostics.csv, per-output-time ladder and snapshot CSVs, summary.json,
/// all stamped with the config hash. Creates out_dir if needed.
void write_artifacts(const RunResult& result, const std::string& out_dir);

std::string summary_json_text(const RunResult& result);

} // namespace nslab
