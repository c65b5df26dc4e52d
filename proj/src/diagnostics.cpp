#include "nslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace nslab {

double total_energy(const SimState& state, const DensityProfile& profile, const Grid& grid,
                    const PhysParams& params) {
    const int n = grid.size();
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) {
        e[i] = profile.rho0[i] *
               (0.5 * state.v[i] * state.v[i] + params.c_v * state.theta[i]);
    }
    return trapz(grid.h, e);
}

double boundary_heat_flux(const SimState& state, const Grid& grid, const PhysParams& params) {
    const int n = grid.size();
    const double h = grid.h;
    const auto& th = state.theta;
    double left = (-3.0 * th[0] + 4.0 * th[1] - th[2]) / (2.0 * h);
    double right = (3.0 * th[n - 1] - 4.0 * th[n - 2] + th[n - 3]) / (2.0 * h);
    return params.kappa * (right / state.J[n - 1] - left / state.J[0]);
}

std::vector<double> viscous_flux(const SimState& state, const DensityProfile& profile,
                                 const Grid& grid, const PhysParams& params) {
    std::vector<double> vy = diff1(grid.h, state.v);
    const int n = grid.size();
    std::vector<double> G(n);
    for (int i = 0; i < n; ++i) {
        G[i] = (params.mu * vy[i] - params.R * profile.rho0[i] * state.theta[i]) / state.J[i];
    }
    return G;
}

double flux_equation_residual(const SimState& before, const SimState& after,
                              const DensityProfile& profile, const Grid& grid,
                              const PhysParams& params) {
    const double dt = after.t - before.t;
    if (!(dt > 0.0)) throw ParameterError("flux_equation_residual: states out of order");
    const int n = grid.size();
    const double h = grid.h;
    const double gam = params.gamma();

    std::vector<double> G0 = viscous_flux(before, profile, grid, params);
    std::vector<double> G1 = viscous_flux(after, profile, grid, params);
    std::vector<double> vy = diff1(h, after.v);
    std::vector<double> Gy = diff1(h, G1);
    for (int i = 0; i < n; ++i) Gy[i] /= profile.rho0[i];
    std::vector<double> dGy = diff1(h, Gy);
    std::vector<double> ty = diff1(h, after.theta);
    for (int i = 0; i < n; ++i) ty[i] /= after.J[i];
    std::vector<double> dty = diff1(h, ty);

    double worst = 0.0;
    for (int i = 2; i <= n - 3; ++i) {
        double r = (G1[i] - G0[i]) / dt - params.mu / after.J[i] * dGy[i] +
                   params.kappa * (gam - 1.0) / after.J[i] * dty[i] +
                   gam * vy[i] / after.J[i] * G1[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

JIdentityAccumulator::JIdentityAccumulator(const InitialData& initial,
                                           const DensityProfile& profile, const Grid& grid,
                                           const PhysParams& params)
    : profile_(&profile), grid_(&grid), params_(params), J0_(initial.J0), v0_(initial.v0) {
    const int n = grid.size();
    time_integral_.assign(n, 0.0);
    prev_integrand_.resize(n);
    // B == 1 at t = 0
    for (int i = 0; i < n; ++i) prev_integrand_[i] = profile.rho0[i] * initial.theta0[i];
}

std::vector<double> JIdentityAccumulator::B_field(const SimState& state) const {
    const int n = grid_->size();
    std::vector<double> integrand(n);
    for (int i = 0; i < n; ++i) integrand[i] = profile_->rho0[i] * (state.v[i] - v0_[i]);
    std::vector<double> I = cumtrapz(grid_->h, integrand);
    std::vector<double> B(n);
    for (int i = 0; i < n; ++i) B[i] = std::exp(I[i] / params_.mu);
    return B;
}

void JIdentityAccumulator::update(const SimState& prev, const SimState& next, double dt) {
    if (std::abs(prev.t - t_) > 1e-9 * (1.0 + t_)) {
        throw UsageError("JIdentityAccumulator: update out of order");
    }
    std::vector<double> B = B_field(next);
    const int n = grid_->size();
    for (int i = 0; i < n; ++i) {
        double cur = profile_->rho0[i] * next.theta[i] / B[i];
        time_integral_[i] += 0.5 * dt * (prev_integrand_[i] + cur);
        prev_integrand_[i] = cur;
    }
    t_ = next.t;
}

JIdentityAccumulator::Result JIdentityAccumulator::evaluate(const SimState& state) const {
    if (std::abs(state.t - t_) > 1e-9 * (1.0 + t_)) {
        throw UsageError("JIdentityAccumulator: accumulator time does not match state");
    }
    Result r;
    r.B = B_field(state);
    const int n = grid_->size();
    r.J_pred.resize(n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        r.J_pred[i] = r.B[i] * (J0_[i] + params_.R / params_.mu * time_integral_[i]);
        worst = std::max(worst, std::abs(state.J[i] - r.J_pred[i]) / state.J[i]);
    }
    r.J_residual = worst;
    double dv = 0.0;
    for (int i = 0; i < n; ++i) dv = std::max(dv, std::abs(state.v[i] - v0_[i]));
    r.tail_bound = profile_->tail_mass(grid_->L) * dv / params_.mu;
    return r;
}

EntropyField entropy_field(const SimState& state, const DensityProfile& profile, const Grid& grid,
                           const PhysParams& params, double theta_floor) {
    const int n = grid.size();
    const double gam = params.gamma();
    EntropyField out;
    out.s.assign(n, 0.0);
    out.masked.assign(n, false);
    for (int i = 0; i < n; ++i) {
        if (state.theta[i] <= theta_floor) {
            out.masked[i] = true;
            ++out.masked_count;
            continue;
        }
        out.s[i] = params.c_v * (std::log(params.R / params.A) +
                                 (gam - 1.0) * std::log(state.J[i]) + std::log(state.theta[i]) -
                                 (gam - 1.0) * std::log(profile.rho0[i]));
    }
    int lo = grid.buffer_lo(), hi = grid.buffer_hi();
    for (int i = lo; i < hi; ++i) {
        if (out.masked[i]) continue;
        if (!out.s_min || out.s[i] < *out.s_min) out.s_min = out.s[i];
        if (!out.s_max || out.s[i] > *out.s_max) out.s_max = out.s[i];
    }
    return out;
}

RegularizedEntropy regularized_entropy(const SimState& state, const DensityProfile& profile,
                                       const PhysParams& params, double epsilon, double M_lower) {
    if (!(epsilon > 0.0)) throw ParameterError("regularized_entropy: epsilon must be > 0");
    const int n = static_cast<int>(state.theta.size());
    const double gam = params.gamma();
    const double eps_rho = std::pow(epsilon, 1.0 / (gam - 1.0));
    RegularizedEntropy out;
    out.epsilon = epsilon;
    out.S_eps.resize(n);
    out.s_eps.resize(n);
    for (int i = 0; i < n; ++i) {
        out.S_eps[i] = std::log(state.theta[i] + epsilon) -
                       (gam - 1.0) * std::log(profile.rho0[i] + eps_rho);
        out.s_eps[i] = out.S_eps[i] + M_lower * state.t;
    }
    return out;
}

void WeightedNorms::update(const SimState& state, const std::vector<double>& G,
                           const DensityProfile& profile, const Grid& grid,
                           const PhysParams& params, double dt) {
    const int n = grid.size();
    const double gam = params.gamma();
    std::vector<double> Jy = diff1(grid.h, state.J);

    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = Jy[i] * Jy[i] / profile.rho0[i];
    double zj = trapz(grid.h, f);
    for (int i = 0; i < n; ++i) f[i] = profile.rho0[i] * state.theta[i] * state.theta[i];
    zj += trapz(grid.h, f);

    for (int i = 0; i < n; ++i) {
        f[i] = std::pow(profile.rho0[i], 2.0 - gam) * state.theta[i] * state.theta[i];
    }
    double zt_sup = trapz(grid.h, f);
    for (int i = 0; i < n; ++i) {
        f[i] = std::pow(profile.rho0[i], 1.0 - gam) * state.theta[i] * state.theta[i];
    }
    double zt_int = trapz(grid.h, f);

    for (int i = 0; i < n; ++i) f[i] = std::pow(profile.rho0[i], -gam) * G[i] * G[i];
    double zg_sup = trapz(grid.h, f);
    for (int i = 0; i < n; ++i) f[i] = std::pow(profile.rho0[i], -gam - 1.0) * G[i] * G[i];
    double zg_int = trapz(grid.h, f);

    zj_ = std::max(zj_, zj);
    zt_sup_ = std::max(zt_sup_, zt_sup);
    zg_sup_ = std::max(zg_sup_, zg_sup);
    if (started_) {
        zt_int_ += 0.5 * dt * (prev_zt_ + zt_int);
        zg_int_ += 0.5 * dt * (prev_zg_ + zg_int);
    }
    prev_zt_ = zt_int;
    prev_zg_ = zg_int;
    started_ = true;
}

std::vector<double> truncation_derivative(const std::vector<double>& trunc, double h) {
    std::vector<double> d = diff1(h, trunc);
    const int n = static_cast<int>(trunc.size());
    auto zero_at = [&](int i, int a, int b, int c) {
        if (trunc[a] == 0.0 && trunc[b] == 0.0 && trunc[c] == 0.0) d[i] = 0.0;
    };
    zero_at(0, 0, 1, 2);
    for (int i = 1; i + 1 < n; ++i) zero_at(i, i - 1, i, i + 1);
    zero_at(n - 1, n - 3, n - 2, n - 1);
    return d;
}

LevelSetLadder::LevelSetLadder(std::vector<double> levels_lower, std::vector<double> levels_upper)
    : levels_lower_(std::move(levels_lower)), levels_upper_(std::move(levels_upper)) {
    q_sup_.assign(levels_lower_.size(), 0.0);
    q_int_.assign(levels_lower_.size(), 0.0);
    q_prev_.assign(levels_lower_.size(), 0.0);
    Q_sup_.assign(levels_upper_.size(), 0.0);
    Q_int_.assign(levels_upper_.size(), 0.0);
    Q_prev_.assign(levels_upper_.size(), 0.0);
}

LevelSetLadder LevelSetLadder::with_default_levels(double ell_lower0, double ell_upper0,
                                                   int count, double lower_span,
                                                   double upper_span_factor) {
    if (count < 2) throw ParameterError("LevelSetLadder: level count must be >= 2");
    std::vector<double> lo(count), up(count);
    double upper_span = upper_span_factor * (1.0 + ell_upper0);
    for (int i = 0; i < count; ++i) {
        double a = static_cast<double>(i) / (count - 1);
        lo[i] = ell_lower0 - lower_span + a * lower_span;
        up[i] = ell_upper0 + a * upper_span;
    }
    return LevelSetLadder(std::move(lo), std::move(up));
}

void LevelSetLadder::update(const RegularizedEntropy& reg, const SimState& state,
                            const DensityProfile& profile, const Grid& grid,
                            const PhysParams& params, double dt, double M_upper) {
    const int n = grid.size();
    const double gam = params.gamma();
    std::vector<double> rho_gm1(n), w_sup(n), w_int(n);
    for (int i = 0; i < n; ++i) {
        rho_gm1[i] = std::pow(profile.rho0[i], gam - 1.0);
        w_sup[i] = std::pow(profile.rho0[i], 2.0 - 2.0 * gam);
        w_int[i] = std::pow(profile.rho0[i], 1.0 - 2.0 * gam);
    }
    const double egrow = std::exp(M_upper * state.t);

    std::vector<double> u(n), f(n);
    for (std::size_t k = 0; k < levels_lower_.size(); ++k) {
        double ell = levels_lower_[k];
        for (int i = 0; i < n; ++i) u[i] = std::max(ell - reg.s_eps[i], 0.0);
        for (int i = 0; i < n; ++i) f[i] = u[i] * u[i];
        double sup_part = trapz(grid.h, f);
        std::vector<double> du = truncation_derivative(u, grid.h);
        for (int i = 0; i < n; ++i) f[i] = du[i] * du[i] / profile.rho0[i];
        double int_part = trapz(grid.h, f);
        q_sup_[k] = std::max(q_sup_[k], sup_part);
        if (started_) q_int_[k] += 0.5 * dt * (q_prev_[k] + int_part);
        q_prev_[k] = int_part;
    }
    for (std::size_t k = 0; k < levels_upper_.size(); ++k) {
        double ell = levels_upper_[k];
        for (int i = 0; i < n; ++i) {
            u[i] = std::max(state.theta[i] - ell * rho_gm1[i] * egrow, 0.0);
        }
        for (int i = 0; i < n; ++i) f[i] = w_sup[i] * u[i] * u[i];
        double sup_part = trapz(grid.h, f);
        std::vector<double> du = truncation_derivative(u, grid.h);
        for (int i = 0; i < n; ++i) f[i] = w_int[i] * du[i] * du[i];
        double int_part = trapz(grid.h, f);
        Q_sup_[k] = std::max(Q_sup_[k], sup_part);
        if (started_) Q_int_[k] += 0.5 * dt * (Q_prev_[k] + int_part);
        Q_prev_[k] = int_part;
    }
    started_ = true;
}

std::vector<double> LevelSetLadder::q() const {
    std::vector<double> out(levels_lower_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = q_sup_[k] + q_int_[k];
    return out;
}

std::vector<double> LevelSetLadder::Q() const {
    std::vector<double> out(levels_upper_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = Q_sup_[k] + Q_int_[k];
    return out;
}

} // namespace nslab
