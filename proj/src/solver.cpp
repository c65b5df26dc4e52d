#include "nslab/solver.hpp"

#include <algorithm>
#include <cmath>

namespace nslab {

void StepControl::validate() const {
    if (!(dt_init > 0.0)) throw ParameterError("StepControl: dt_init must be > 0");
    if (!(dt_min > 0.0)) throw ParameterError("StepControl: dt_min must be > 0");
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw ParameterError("StepControl: safety must lie in (0, 1]");
    }
    if (max_retries < 1) throw ParameterError("StepControl: max_retries must be >= 1");
    if (!(reaction_cap > 0.0)) throw ParameterError("StepControl: reaction_cap must be > 0");
    if (!(growth >= 1.0)) throw ParameterError("StepControl: growth must be >= 1");
}

SolverSetup make_setup(const PhysParams& params, const DensityProfile& profile, const Grid& grid,
                       const InitialData& initial) {
    SolverSetup s;
    s.params = params;
    s.profile = &profile;
    s.grid = &grid;
    s.theta_bc_left = initial.theta0.front();
    s.theta_bc_right = initial.theta0.back();
    return s;
}

namespace {

void check_finite(const std::vector<double>& f, const char* what) {
    for (double x : f) {
        if (!std::isfinite(x)) throw NumericalError(std::string("step: NaN/Inf in ") + what);
    }
}

} // namespace

StepResult step(const SimState& state, double dt, const SolverSetup& setup) {
    if (!(dt > 0.0)) throw ParameterError("step: dt must be > 0");
    const Grid& grid = *setup.grid;
    const auto& rho0 = setup.profile->rho0;
    const PhysParams& pp = setup.params;
    const int n = grid.size();
    const double h = grid.h;

    check_finite(state.J, "J");
    check_finite(state.v, "v");
    check_finite(state.theta, "theta");

    // Stage 1: implicit momentum diffusion with harmonic-mean 1/J faces,
    // Dirichlet v = 0 at both ends. Unknowns are the interior nodes.
    std::vector<double> face(n - 1); // face[i] sits between nodes i and i+1
    for (int i = 0; i < n - 1; ++i) face[i] = 2.0 / (state.J[i] + state.J[i + 1]);

    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = rho0[i] * state.theta[i] / state.J[i];

    const int m = n - 2; // interior count
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (int k = 0; k < m; ++k) {
        int i = k + 1;
        double am = pp.mu * face[i - 1] / (h * h);
        double ap = pp.mu * face[i] / (h * h);
        di[k] = rho0[i] / dt + am + ap;
        lo[k] = (k > 0) ? -am : 0.0;
        up[k] = (k + 1 < m) ? -ap : 0.0;
        rhs[k] = rho0[i] * state.v[i] / dt - pp.R * (p[i + 1] - p[i - 1]) / (2.0 * h);
        // boundary velocities are zero, so no Dirichlet contribution
    }
    std::vector<double> vstar(n, 0.0);
    {
        std::vector<double> x = solve_tridiagonal(lo, di, up, rhs);
        for (int k = 0; k < m; ++k) vstar[k + 1] = x[k];
    }
    check_finite(vstar, "v*");

    // Stage 2: J update from the new velocity.
    std::vector<double> vy = diff1(h, vstar);
    SimState next;
    next.t = state.t + dt;
    next.J.resize(n);
    for (int i = 0; i < n; ++i) next.J[i] = state.J[i] + dt * vy[i];
    for (int i = 0; i < n; ++i) {
        if (!(next.J[i] > 0.0)) {
            return {false, {}, "J lost positivity at node " + std::to_string(i)};
        }
    }

    // Stage 3: implicit temperature diffusion and reaction, explicit heating,
    // Dirichlet theta = theta0 at both ends.
    for (int i = 0; i < n - 1; ++i) face[i] = 2.0 / (next.J[i] + next.J[i + 1]);
    for (int k = 0; k < m; ++k) {
        int i = k + 1;
        double bm = pp.kappa * face[i - 1] / (h * h);
        double bp = pp.kappa * face[i] / (h * h);
        double react = pp.R * rho0[i] * vy[i] / next.J[i];
        di[k] = pp.c_v * rho0[i] / dt + bm + bp + react;
        if (!(pp.c_v * rho0[i] / dt + react > 0.0)) {
            return {false, {}, "temperature matrix lost diagonal dominance at node " +
                                   std::to_string(i)};
        }
        lo[k] = (k > 0) ? -bm : 0.0;
        up[k] = (k + 1 < m) ? -bp : 0.0;
        rhs[k] = pp.c_v * rho0[i] * state.theta[i] / dt +
                 pp.mu * vy[i] * vy[i] / next.J[i];
        if (k == 0) rhs[k] += bm * setup.theta_bc_left;
        if (k + 1 == m) rhs[k] += bp * setup.theta_bc_right;
    }
    next.theta.resize(n);
    next.theta.front() = setup.theta_bc_left;
    next.theta.back() = setup.theta_bc_right;
    {
        std::vector<double> x = solve_tridiagonal(lo, di, up, rhs);
        for (int k = 0; k < m; ++k) next.theta[k + 1] = x[k];
    }
    check_finite(next.theta, "theta");
    for (int i = 0; i < n; ++i) {
        if (next.theta[i] < 0.0) {
            return {false, {}, "theta lost nonnegativity at node " + std::to_string(i)};
        }
    }

    next.v = std::move(vstar);
    return {true, std::move(next), {}};
}

double reaction_dt_limit(const SimState& state, const SolverSetup& setup, double reaction_cap) {
    std::vector<double> vy = diff1(setup.grid->h, state.v);
    double worst = 0.0;
    for (std::size_t i = 0; i < vy.size(); ++i) {
        worst = std::max(worst, setup.params.R * std::abs(vy[i]) /
                                    (setup.params.c_v * state.J[i]));
    }
    if (worst == 0.0) return std::numeric_limits<double>::infinity();
    return reaction_cap / worst;
}

double wave_dt_limit(const SimState& state, const SolverSetup& setup) {
    const double gam = setup.params.gamma();
    double worst = 0.0;
    for (std::size_t i = 0; i < state.theta.size(); ++i) {
        double c = std::sqrt(gam * setup.params.R * state.theta[i]);
        worst = std::max(worst, c / state.J[i]);
    }
    if (worst == 0.0) return std::numeric_limits<double>::infinity();
    return setup.grid->h / worst;
}

Trajectory run_simulation(const InitialData& initial, const SolverSetup& setup,
                          const StepControl& control, double T,
                          std::vector<double> output_times,
                          const std::vector<StepObserver>& observers) {
    control.validate();
    if (T < 0.0) throw ParameterError("run_simulation: T must be >= 0");

    SimState state;
    state.t = 0.0;
    state.J = initial.J0;
    state.v = initial.v0;
    state.theta = initial.theta0;
    if (!state.satisfies_invariants()) {
        throw ParameterError("run_simulation: initial state violates invariants");
    }

    if (output_times.empty()) output_times = {0.0, T};
    std::sort(output_times.begin(), output_times.end());
    output_times.erase(std::unique(output_times.begin(), output_times.end()), output_times.end());

    Trajectory traj;
    std::size_t out_idx = 0;
    auto snapshot_due = [&](double t) {
        while (out_idx < output_times.size() && output_times[out_idx] <= t + 1e-14 * (1.0 + T)) {
            traj.states.push_back(state);
            ++out_idx;
        }
    };
    snapshot_due(0.0);
    if (T == 0.0) {
        if (traj.states.empty()) traj.states.push_back(state);
        return traj;
    }

    double dt_prev = control.dt_init;
    bool first = true;
    while (state.t < T - 1e-14 * (1.0 + T)) {
        double limit = std::min(reaction_dt_limit(state, setup, control.reaction_cap),
                                wave_dt_limit(state, setup));
        double dt = std::min({first ? control.dt_init : control.growth * dt_prev,
                              control.safety * limit, control.dt_max});
        first = false;
        // clip to land exactly on the next output time and on T
        double t_stop = T;
        if (out_idx < output_times.size()) t_stop = std::min(t_stop, output_times[out_idx]);
        dt = std::min(dt, t_stop - state.t);

        int tries = 0;
        for (;;) {
            StepResult res = step(state, dt, setup);
            if (res.accepted) {
                for (const auto& obs : observers) obs(state, res.state, dt);
                state = std::move(res.state);
                traj.accepted_dts.push_back(dt);
                dt_prev = dt;
                break;
            }
            ++traj.retries;
            ++tries;
            dt *= 0.5;
            if (dt < control.dt_min || tries > control.max_retries) {
                throw SolverAbort("run_simulation: step rejected at dt_min (t = " +
                                      std::to_string(state.t) + "): " + res.rejection,
                                  state);
            }
        }
        snapshot_due(state.t);
    }
    snapshot_due(T);
    return traj;
}

} // namespace nslab
