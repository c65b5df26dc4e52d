#pragma once

#include <random>
#include <vector>

#include "nslab/core.hpp"

namespace nslab {

/// Sum of Gaussians with closed-form derivative; used to generate smooth
/// test functions without differencing error.
struct GaussianMixture {
    struct Term {
        double a = 1.0; // amplitude
        double c = 0.0; // center
        double w = 1.0; // width
    };
    std::vector<Term> terms;

    double value(double y) const;
    double deriv(double y) const;
};

GaussianMixture random_mixture(std::mt19937_64& rng, int nterms, double amp_lo, double amp_hi,
                               double center_span, double width_lo, double width_hi);

/// One instance of the weighted sup-norm interpolation bound. omega carries
/// its analytic derivative and an exact log-Lipschitz constant K with
/// |omega'| <= K omega; f and eta likewise come with closed forms.
struct InterpolationInstance {
    std::vector<double> omega;
    std::vector<double> domega;
    std::vector<double> eta;
    std::vector<double> f;  // nonnegative
    std::vector<double> df; // analytic derivative
    double K = 0.0;

    void validate() const;
};

struct SlackReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
    bool pass = true;
};

/// sup (omega f^2) <= 2K ||sqrt(omega) f||_2^2
///   + 8 ||omega||_inf^{1/3} ||omega f||_1^{2/3} ||f'/sqrt(eta)||_2^{4/3} ||eta||_inf^{2/3}.
/// pass iff slack >= -tol_factor * rhs (quadrature allowance).
SlackReport check_sqrt_weight_bound(const InterpolationInstance& inst, const Grid& grid,
                                    double tol_factor = 1e-6);

/// Random instance with omega a power-law weight (exact K), eta a bounded
/// positive mixture, f a nonnegative mixture.
InterpolationInstance make_interp_instance(std::mt19937_64& rng, const Grid& grid);

struct GnReport {
    double lhs = 0.0;
    double denom = 0.0; // bracketed right-hand side without the generic constant
    double ratio = 0.0;
};

/// Weighted Gagliardo-Nirenberg ratio
///   ||rho0^sigma f||_q /
///   (||rho0||_inf^{1/4-1/(2q)} (||rho0^sigma f||_2
///      + ||rho0^sigma f||_2^{1/2+1/q} ||rho0^{sigma-1/2} f'||_2^{1/2-1/q})).
/// The multiplicative constant in the underlying bound is generic, so the
/// meaningful assertion is boundedness of this ratio over a family, not a
/// fixed numeric threshold. q may be infinity; q = 2 collapses the bracket
/// and gives exactly 1/2 for any nonzero f.
GnReport check_weighted_gn(const std::vector<double>& rho0, const std::vector<double>& f,
                           const std::vector<double>& df, double sigma, double q,
                           const Grid& grid);

} // namespace nslab
