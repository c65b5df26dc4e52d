#include "nslab/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace nslab {

double GaussianMixture::value(double y) const {
    double s = 0.0;
    for (const Term& t : terms) {
        double z = (y - t.c) / t.w;
        s += t.a * std::exp(-0.5 * z * z);
    }
    return s;
}

double GaussianMixture::deriv(double y) const {
    double s = 0.0;
    for (const Term& t : terms) {
        double z = (y - t.c) / t.w;
        s += -t.a * z / t.w * std::exp(-0.5 * z * z);
    }
    return s;
}

GaussianMixture random_mixture(std::mt19937_64& rng, int nterms, double amp_lo, double amp_hi,
                               double center_span, double width_lo, double width_hi) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GaussianMixture m;
    m.terms.resize(nterms);
    for (auto& t : m.terms) {
        t.a = amp_lo + (amp_hi - amp_lo) * unit(rng);
        t.c = center_span * (2.0 * unit(rng) - 1.0);
        t.w = width_lo + (width_hi - width_lo) * unit(rng);
    }
    return m;
}

void InterpolationInstance::validate() const {
    const std::size_t n = omega.size();
    if (domega.size() != n || eta.size() != n || f.size() != n || df.size() != n) {
        throw ParameterError("InterpolationInstance: field sizes disagree");
    }
    if (!(K >= 0.0)) throw ParameterError("InterpolationInstance: K must be >= 0");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(omega[i] >= 0.0)) throw ParameterError("InterpolationInstance: omega must be >= 0");
        if (!(eta[i] > 0.0)) throw ParameterError("InterpolationInstance: eta must be > 0");
        if (!(f[i] >= 0.0)) throw ParameterError("InterpolationInstance: f must be >= 0");
        if (std::abs(domega[i]) > K * omega[i] * (1.0 + 1e-12)) {
            throw ParameterError("InterpolationInstance: |omega'| <= K omega fails at node " +
                                 std::to_string(i));
        }
    }
}

SlackReport check_sqrt_weight_bound(const InterpolationInstance& inst, const Grid& grid,
                                    double tol_factor) {
    inst.validate();
    const int n = grid.size();
    std::vector<double> wf2(n), wf(n), g(n);
    double lhs = 0.0, omega_sup = 0.0, eta_sup = 0.0;
    for (int i = 0; i < n; ++i) {
        wf2[i] = inst.omega[i] * inst.f[i] * inst.f[i];
        wf[i] = inst.omega[i] * inst.f[i];
        g[i] = inst.df[i] * inst.df[i] / inst.eta[i];
        lhs = std::max(lhs, wf2[i]);
        omega_sup = std::max(omega_sup, inst.omega[i]);
        eta_sup = std::max(eta_sup, inst.eta[i]);
    }
    double rhs = 2.0 * inst.K * trapz(grid.h, wf2) +
                 8.0 * std::cbrt(omega_sup) * std::pow(trapz(grid.h, wf), 2.0 / 3.0) *
                     std::pow(trapz(grid.h, g), 2.0 / 3.0) * std::pow(eta_sup, 2.0 / 3.0);
    SlackReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.slack = rhs - lhs;
    rep.pass = rep.slack >= -tol_factor * rhs;
    return rep;
}

InterpolationInstance make_interp_instance(std::mt19937_64& rng, const Grid& grid) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = grid.size();
    InterpolationInstance inst;
    inst.omega.resize(n);
    inst.domega.resize(n);
    inst.eta.resize(n);
    inst.f.resize(n);
    inst.df.resize(n);

    // omega = c <y>^{-p}: |omega'|/omega = p|y|/(1+y^2) <= p/2 exactly
    const double p = 4.0 * unit(rng);
    const double c = 0.2 + 2.0 * unit(rng);
    inst.K = 0.5 * p;
    GaussianMixture fm = random_mixture(rng, 1 + static_cast<int>(4.0 * unit(rng)), 0.1, 2.0,
                                        0.5 * grid.L, 0.5, 0.2 * grid.L);
    GaussianMixture em = random_mixture(rng, 1 + static_cast<int>(3.0 * unit(rng)), 0.0, 1.5,
                                        0.5 * grid.L, 1.0, 0.2 * grid.L);
    const double eta0 = 0.2 + unit(rng);
    for (int i = 0; i < n; ++i) {
        double y = grid.nodes[i];
        double u = 1.0 + y * y;
        inst.omega[i] = c * std::pow(u, -0.5 * p);
        inst.domega[i] = -p * y / u * inst.omega[i];
        inst.eta[i] = eta0 + em.value(y);
        inst.f[i] = fm.value(y); // positive amplitudes keep f >= 0
        inst.df[i] = fm.deriv(y);
    }
    return inst;
}

namespace {

double norm_q(double h, const std::vector<double>& g, double q) {
    if (std::isinf(q)) return max_abs(g);
    std::vector<double> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = std::pow(std::abs(g[i]), q);
    return std::pow(trapz(h, p), 1.0 / q);
}

} // namespace

GnReport check_weighted_gn(const std::vector<double>& rho0, const std::vector<double>& f,
                           const std::vector<double>& df, double sigma, double q,
                           const Grid& grid) {
    if (sigma == 0.0) throw ParameterError("check_weighted_gn: sigma must be nonzero");
    if (!(q >= 2.0)) throw ParameterError("check_weighted_gn: q must lie in [2, inf]");
    const int n = grid.size();
    if (static_cast<int>(rho0.size()) != n || static_cast<int>(f.size()) != n ||
        static_cast<int>(df.size()) != n) {
        throw ParameterError("check_weighted_gn: array sizes disagree with grid");
    }
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    std::vector<double> g(n), gd(n);
    double rho_sup = 0.0;
    for (int i = 0; i < n; ++i) {
        g[i] = std::pow(rho0[i], sigma) * f[i];
        gd[i] = std::pow(rho0[i], sigma - 0.5) * df[i];
        rho_sup = std::max(rho_sup, rho0[i]);
    }
    const double g2 = norm_q(grid.h, g, 2.0);
    const double gd2 = norm_q(grid.h, gd, 2.0);
    GnReport rep;
    rep.lhs = norm_q(grid.h, g, q);
    rep.denom = std::pow(rho_sup, 0.25 - 0.5 * inv_q) *
                (g2 + std::pow(g2, 0.5 + inv_q) * std::pow(gd2, 0.5 - inv_q));
    rep.ratio = rep.denom > 0.0 ? rep.lhs / rep.denom : 0.0;
    return rep;
}

} // namespace nslab
