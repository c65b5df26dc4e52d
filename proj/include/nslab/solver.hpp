#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nslab/core.hpp"
#include "nslab/profiles.hpp"

namespace nslab {

struct StepControl {
    double dt_init = 1.0;
    double dt_min = 1e-12;
    double safety = 0.5;
    int max_retries = 20;
    double reaction_cap = 0.9;
    double dt_max = std::numeric_limits<double>::infinity();
    double growth = 1.2;

    void validate() const;
};

/// Everything a step needs besides the state: constants, geometry, and the
/// fixed temperature boundary values (theta0 at +-L).
struct SolverSetup {
    PhysParams params;
    const DensityProfile* profile = nullptr;
    const Grid* grid = nullptr;
    double theta_bc_left = 0.0;
    double theta_bc_right = 0.0;
};

SolverSetup make_setup(const PhysParams& params, const DensityProfile& profile, const Grid& grid,
                       const InitialData& initial);

struct StepResult {
    bool accepted = false;
    SimState state;        // valid only when accepted
    std::string rejection; // reason when rejected
};

/// One semi-implicit step: implicit momentum diffusion, explicit Jacobian
/// update from the new velocity, implicit temperature diffusion plus implicit
/// linear reaction with explicit nonnegative viscous heating. Rejects (for dt
/// halving by the driver) on loss of positivity or diagonal dominance; NaN is
/// a hard NumericalError.
StepResult step(const SimState& state, double dt, const SolverSetup& setup);

struct Trajectory {
    std::vector<SimState> states; // snapshots at the requested output times
    std::vector<double> accepted_dts;
    long retries = 0;
};

/// Raised when the driver cannot make progress at dt_min; carries the state
/// for post-mortem inspection.
struct SolverAbort : Error {
    SolverAbort(std::string msg, SimState dump_state)
        : Error(std::move(msg)), dump(std::move(dump_state)) {}
    SimState dump;
};

using StepObserver = std::function<void(const SimState& prev, const SimState& next, double dt)>;

/// Integrate to T with the adaptive controller. Observers run synchronously
/// after every accepted step. Snapshots are taken exactly at output_times
/// (steps are clipped to land on them); an empty list means {0, T}.
Trajectory run_simulation(const InitialData& initial, const SolverSetup& setup,
                          const StepControl& control, double T,
                          std::vector<double> output_times = {},
                          const std::vector<StepObserver>& observers = {});

/// Largest dt meeting the implicit-reaction positivity constraint
/// dt * max |R v_y / (c_v J)| <= reaction_cap for the given state.
double reaction_dt_limit(const SimState& state, const SolverSetup& setup, double reaction_cap);

/// Acoustic resolution constraint dt <= h / max(sqrt(gamma R theta) / J),
/// keeping the time step proportional to the mesh width.
double wave_dt_limit(const SimState& state, const SolverSetup& setup);

} // namespace nslab
