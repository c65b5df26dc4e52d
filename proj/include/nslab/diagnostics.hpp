#pragma once

#include <optional>
#include <vector>

#include "nslab/core.hpp"
#include "nslab/profiles.hpp"

namespace nslab {

/// Per-step scalars and fields monitored along a run.
struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double E_total = 0.0;
    std::vector<double> G;
    std::vector<double> B;
    double J_residual = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
    double theta_max_weighted = 0.0; // sup theta * rho0^{1-gamma}
    int masked_nodes = 0;
};

/// Trapezoid quadrature of rho0 (v^2/2 + c_v theta) over the truncated domain.
double total_energy(const SimState& state, const DensityProfile& profile, const Grid& grid,
                    const PhysParams& params);

/// Net heat flux kappa theta_y / J out of the right end minus the left end,
/// one-sided second-order differences. With v = 0 at the ends this is the
/// only energy flux through the truncated boundary, so
/// E(t) - E(0) - \int_0^t (this) dtau is the conserved discrete quantity.
double boundary_heat_flux(const SimState& state, const Grid& grid, const PhysParams& params);

/// Effective viscous flux G = mu v_y / J - R rho0 theta / J, centered v_y
/// with one-sided ends.
std::vector<double> viscous_flux(const SimState& state, const DensityProfile& profile,
                                 const Grid& grid, const PhysParams& params);

/// Max-norm discrete residual of the flux equation
/// G_t - (mu/J)(G_y/rho0)_y + kappa(gamma-1)/J (theta_y/J)_y + gamma (v_y/J) G = 0
/// between two consecutive states (forward difference in time, interior nodes).
double flux_equation_residual(const SimState& before, const SimState& after,
                              const DensityProfile& profile, const Grid& grid,
                              const PhysParams& params);

/// Running check of the representation J = B (J0 + (R/mu) \int_0^t rho0 theta / B).
/// update() must be fed every accepted step in order; evaluate() compares the
/// prediction against the current J.
class JIdentityAccumulator {
  public:
    JIdentityAccumulator(const InitialData& initial, const DensityProfile& profile,
                         const Grid& grid, const PhysParams& params);

    void update(const SimState& prev, const SimState& next, double dt);

    struct Result {
        std::vector<double> B;
        std::vector<double> J_pred;
        double J_residual = 0.0; // max_i |J_i - J_pred_i| / J_i
        double tail_bound = 0.0; // bound on the neglected (-inf, -L] part of B's integral
    };
    Result evaluate(const SimState& state) const;

    std::vector<double> B_field(const SimState& state) const;

  private:
    const DensityProfile* profile_;
    const Grid* grid_;
    PhysParams params_;
    std::vector<double> J0_, v0_;
    std::vector<double> time_integral_;   // per node: \int rho0 theta / B dtau
    std::vector<double> prev_integrand_;
    double t_ = 0.0;
};

struct EntropyField {
    std::vector<double> s; // meaningful only where masked[i] == false
    std::vector<bool> masked;
    std::optional<double> s_min; // extrema over the buffer-excluded region
    std::optional<double> s_max;
    int masked_count = 0;
};

/// s = c_v (log(R/A) + (gamma-1) log J + log theta - (gamma-1) log rho0),
/// masked where theta <= floor. Extrema exclude the boundary buffer.
EntropyField entropy_field(const SimState& state, const DensityProfile& profile, const Grid& grid,
                           const PhysParams& params, double theta_floor = 1e-300);

struct RegularizedEntropy {
    double epsilon = 1e-10;
    std::vector<double> S_eps; // log(theta+eps) - (gamma-1) log(rho0 + eps^{1/(gamma-1)})
    std::vector<double> s_eps; // S_eps + M_lower * t
};

RegularizedEntropy regularized_entropy(const SimState& state, const DensityProfile& profile,
                                       const PhysParams& params, double epsilon, double M_lower);

/// Sup-in-time plus time-integral weighted norms Z_J, Z_theta, Z_G.
class WeightedNorms {
  public:
    void update(const SimState& state, const std::vector<double>& G,
                const DensityProfile& profile, const Grid& grid, const PhysParams& params,
                double dt);

    double ZJ() const { return zj_; }
    double Ztheta() const { return zt_sup_ + zt_int_; }
    double ZG() const { return zg_sup_ + zg_int_; }

  private:
    double zj_ = 0.0;
    double zt_sup_ = 0.0, zt_int_ = 0.0;
    double zg_sup_ = 0.0, zg_int_ = 0.0;
    double prev_zt_ = 0.0, prev_zg_ = 0.0;
    bool started_ = false;
};

/// Accumulated level-set truncation energies: q_l for the lower (entropy)
/// iteration and Q_l for the upper (temperature) iteration.
class LevelSetLadder {
  public:
    LevelSetLadder() = default;
    LevelSetLadder(std::vector<double> levels_lower, std::vector<double> levels_upper);

    /// Default ladders: 33 uniform levels on [l_lower0 - 20, l_lower0] and
    /// [l_upper0, l_upper0 + 20 (1 + l_upper0)].
    static LevelSetLadder with_default_levels(double ell_lower0, double ell_upper0,
                                              int count = 33, double lower_span = 20.0,
                                              double upper_span_factor = 20.0);

    void update(const RegularizedEntropy& reg, const SimState& state,
                const DensityProfile& profile, const Grid& grid, const PhysParams& params,
                double dt, double M_upper);

    const std::vector<double>& levels_lower() const { return levels_lower_; }
    const std::vector<double>& levels_upper() const { return levels_upper_; }
    std::vector<double> q() const;
    std::vector<double> Q() const;

  private:
    std::vector<double> levels_lower_, levels_upper_;
    std::vector<double> q_sup_, q_int_, q_prev_;
    std::vector<double> Q_sup_, Q_int_, Q_prev_;
    bool started_ = false;
};

/// Derivative of a truncated field: centered differences of the truncation,
/// zero wherever the truncation vanishes on the whole stencil.
std::vector<double> truncation_derivative(const std::vector<double>& trunc, double h);

} // namespace nslab
