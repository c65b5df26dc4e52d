#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nslab/errors.hpp"

namespace nslab {

/// Gas and transport constants. gamma is always derived from (R, c_v),
/// never stored separately.
struct PhysParams {
    double mu = 1.0;    // viscosity
    double kappa = 1.0; // heat conductivity
    double R = 1.0;     // gas constant
    double c_v = 1.0;   // specific heat at constant volume
    double A = 1.0;     // entropy-state constant

    double gamma() const { return 1.0 + R / c_v; }

    void validate() const;
};

/// Uniform collocated grid on [-L, L] with N cells (N+1 nodes).
struct Grid {
    double L = 0.0;
    int N = 0;
    double h = 0.0;
    std::vector<double> nodes;
    double buffer_fraction = 0.125;

    int size() const { return N + 1; }

    /// First and one-past-last node index of the buffer-excluded region,
    /// i.e. nodes with |y| <= L - buffer_fraction * 2L.
    int buffer_lo() const;
    int buffer_hi() const;
};

Grid make_grid(double L, int N, double buffer_fraction);

/// Evolving unknowns of the Lagrangian system on the grid nodes.
struct SimState {
    double t = 0.0;
    std::vector<double> J;
    std::vector<double> v;
    std::vector<double> theta;

    bool satisfies_invariants() const;
};

/// Thomas algorithm for a strictly diagonally dominant tridiagonal system.
/// lower[i] multiplies x[i-1] (lower[0] ignored), upper[i] multiplies x[i+1]
/// (upper[n-1] ignored). Throws NumericalError carrying the pivot index on a
/// dominance violation or zero pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs);

// --- small numerical helpers shared across modules ---

/// Composite trapezoid of nodal values with uniform spacing h.
double trapz(double h, const std::vector<double>& f);

/// Trapezoid of f over node index range [i0, i1].
double trapz_range(double h, const std::vector<double>& f, int i0, int i1);

/// Running trapezoid from the left end; out[0] = 0.
std::vector<double> cumtrapz(double h, const std::vector<double>& f);

/// Centered first difference, second-order one-sided at both ends.
std::vector<double> diff1(double h, const std::vector<double>& f);

double max_abs(const std::vector<double>& f);

} // namespace nslab
