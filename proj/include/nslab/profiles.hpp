#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/core.hpp"

namespace nslab {

/// Initial density rho0 sampled on the grid together with its first and
/// second derivatives. For the power-law family the derivatives are exact
/// closed forms; for tabulated profiles they are 4th-order finite
/// differences and flagged approximate.
struct DensityProfile {
    double K_rho = 1.0;
    double ell_rho = 0.0;
    std::vector<double> rho0;
    std::vector<double> drho0;
    std::vector<double> d2rho0;
    bool analytic_derivatives = true;

    /// Mass of rho0 beyond [-L, L], estimated from the power-law tail
    /// (infinity when the tail is not integrable).
    double tail_mass(double L) const;
};

/// rho0(y) = K <y>^{-ell}, <y> = sqrt(1 + y^2), with exact derivatives.
DensityProfile density_power_law(double K_rho, double ell_rho, const Grid& grid);

/// Cubic interpolation of a tabulated (y, rho0[, v0]) file onto the grid.
/// Columns: strictly increasing y, rho0 > 0, optional v0.
DensityProfile density_from_table(const std::string& path, const Grid& grid,
                                  std::vector<double>* v0_out = nullptr);

/// Grid suprema of |rho0'|/rho0^{3/2} and |rho0''|/rho0^2, plus the ratio of
/// each supremum on |y| <= L versus |y| <= L/2. A growth ratio near 1 signals
/// a finite whole-line constant; a ratio well above 1 signals divergence.
struct DecayConstants {
    double K1 = 0.0;
    double K2 = 0.0;
    double K1_growth = 1.0;
    double K2_growth = 1.0;
};

DecayConstants decay_constants(const DensityProfile& profile, const Grid& grid);

struct InitialData {
    std::vector<double> J0;
    std::vector<double> v0;
    std::vector<double> theta0;
    std::optional<std::vector<double>> s0;
    std::optional<std::vector<double>> dv0; // analytic v0' when available
    double J_lower = 1.0;
    double J_upper = 1.0;

    void record_J_bounds();
};

/// theta0 = (A/R) exp(s0/c_v) rho0^{gamma-1}, nodewise; s0 is stored.
void theta_from_entropy(const std::vector<double>& s0, const DensityProfile& profile,
                        const PhysParams& params, InitialData& initial);

/// Smooth compactly supported bump: amplitude * exp(1/((y/w)^2 - 1)) on
/// |y| < w, zero outside. Also fills the analytic derivative.
void bump_velocity(double amplitude, double width, const Grid& grid, InitialData& initial);

enum class AssumptionStatus { Pass, Diverging, Fail };

struct AssumptionEntry {
    std::string name;
    double value = 0.0;        // grid functional (sup or quadrature)
    double growth_ratio = 1.0; // full-domain vs half-domain value
    AssumptionStatus status = AssumptionStatus::Pass;
};

struct AssumptionReport {
    std::vector<AssumptionEntry> entries;
    bool hard_reject = false; // interior vacuum
    int failing_count() const;
    const AssumptionEntry* find(const std::string& name) const;
};

/// Numerically probes (H0)-(H2), (HS), and finite mass on the truncated grid.
/// "Pass" means bounded on [-L, L] with a non-growing tail indicator; the
/// checker can only witness divergence, not prove whole-line boundedness.
AssumptionReport check_assumptions(const DensityProfile& profile, const InitialData& initial,
                                   const Grid& grid, const PhysParams& params,
                                   double growth_threshold = 1.5);

/// Level and drift constants feeding the entropy bounds.
struct EntropyLevelParams {
    double s_lower0 = 0.0; // inf s0
    double s_upper0 = 0.0; // sup s0
    double ell_lower0 = 0.0;
    double ell_upper0 = 0.0;
    double M_lower = 0.0;
    double M_upper = 0.0;
    double J_lowerT = 1.0;
    double J_upperT = 1.0;
};

EntropyLevelParams entropy_level_params(const InitialData& initial, const DecayConstants& decay,
                                        double J_lowerT, double J_upperT,
                                        const PhysParams& params);

} // namespace nslab
