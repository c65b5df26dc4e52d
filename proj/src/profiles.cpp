#include "nslab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nslab {

namespace {

// 4th-order centered first/second differences, 2nd-order one-sided at ends.
std::vector<double> diff1_o4(double h, const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d = diff1(h, f);
    for (int i = 2; i + 2 < n; ++i) {
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    return d;
}

std::vector<double> diff2_o4(double h, const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d(n);
    for (int i = 1; i + 1 < n; ++i) {
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
    }
    for (int i = 2; i + 2 < n; ++i) {
        d[i] = (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) /
               (12.0 * h * h);
    }
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (h * h);
    return d;
}

// Natural cubic spline through (xs, ys), evaluated at x.
class CubicSpline {
  public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const int n = static_cast<int>(x_.size());
        if (n < 2) throw ParameterError("CubicSpline: need at least 2 points");
        m_.assign(n, 0.0);
        if (n == 2) return;
        std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
        for (int i = 1; i + 1 < n; ++i) {
            double h0 = x_[i] - x_[i - 1];
            double h1 = x_[i + 1] - x_[i];
            lo[i] = h0;
            di[i] = 2.0 * (h0 + h1) + 1e-300;
            up[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        m_ = solve_tridiagonal(lo, di, up, rhs);
    }

    double operator()(double x) const {
        const int n = static_cast<int>(x_.size());
        int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        double h = x_[i + 1] - x_[i];
        double a = (x_[i + 1] - x) / h;
        double b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

  private:
    std::vector<double> x_, y_, m_;
};

double weighted_l2(double h, const std::vector<double>& w, const std::vector<double>& f, int i0,
                   int i1) {
    std::vector<double> g(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = w[i] * w[i] * f[i] * f[i];
    return std::sqrt(trapz_range(h, g, i0, i1));
}

double sup_range(const std::vector<double>& f, int i0, int i1) {
    double m = 0.0;
    for (int i = i0; i <= i1; ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

} // namespace

double DensityProfile::tail_mass(double L) const {
    if (ell_rho > 1.0) {
        return 2.0 * K_rho * std::pow(L, 1.0 - ell_rho) / (ell_rho - 1.0);
    }
    return std::numeric_limits<double>::infinity();
}

DensityProfile density_power_law(double K_rho, double ell_rho, const Grid& grid) {
    if (!(K_rho > 0.0)) throw ParameterError("density_power_law: K_rho must be > 0");
    if (!(ell_rho >= 0.0)) throw ParameterError("density_power_law: ell_rho must be >= 0");
    DensityProfile p;
    p.K_rho = K_rho;
    p.ell_rho = ell_rho;
    p.analytic_derivatives = true;
    const int n = grid.size();
    p.rho0.resize(n);
    p.drho0.resize(n);
    p.d2rho0.resize(n);
    for (int i = 0; i < n; ++i) {
        double y = grid.nodes[i];
        double u = 1.0 + y * y; // <y>^2
        double base = K_rho * std::pow(u, -0.5 * ell_rho);
        p.rho0[i] = base;
        // d/dy K u^{-l/2} = -K l y u^{-l/2-1}
        p.drho0[i] = -ell_rho * y * base / u;
        // d2/dy2 = K l u^{-l/2-2} ((l+1) y^2 - 1)
        p.d2rho0[i] = ell_rho * base * ((ell_rho + 1.0) * y * y - 1.0) / (u * u);
    }
    return p;
}

DensityProfile density_from_table(const std::string& path, const Grid& grid,
                                  std::vector<double>* v0_out) {
    std::ifstream in(path);
    if (!in) throw ParameterError("density_from_table: cannot open " + path);
    std::vector<double> ys, rhos, vs;
    std::string line;
    bool has_v = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double y, rho;
        if (!(ss >> y >> rho)) continue;
        double v;
        if (ss >> v) {
            has_v = true;
            vs.push_back(v);
        } else if (has_v) {
            throw ParameterError("density_from_table: inconsistent column count in " + path);
        }
        if (!ys.empty() && y <= ys.back()) {
            throw ParameterError("density_from_table: y column must be strictly increasing");
        }
        ys.push_back(y);
        rhos.push_back(rho);
    }
    if (ys.size() < 4) throw ParameterError("density_from_table: need at least 4 rows");
    if (ys.front() > -grid.L || ys.back() < grid.L) {
        throw ParameterError("density_from_table: table does not cover [-L, L]");
    }

    DensityProfile p;
    p.analytic_derivatives = false;
    CubicSpline spline(ys, rhos);
    const int n = grid.size();
    p.rho0.resize(n);
    for (int i = 0; i < n; ++i) p.rho0[i] = spline(grid.nodes[i]);
    p.drho0 = diff1_o4(grid.h, p.rho0);
    p.d2rho0 = diff2_o4(grid.h, p.rho0);
    if (v0_out) {
        v0_out->assign(n, 0.0);
        if (has_v) {
            CubicSpline vspline(ys, vs);
            for (int i = 0; i < n; ++i) (*v0_out)[i] = vspline(grid.nodes[i]);
        }
    }
    return p;
}

DecayConstants decay_constants(const DensityProfile& profile, const Grid& grid) {
    const int n = grid.size();
    if (static_cast<int>(profile.rho0.size()) != n) {
        throw ParameterError("decay_constants: profile/grid size mismatch");
    }
    std::vector<double> r1(n), r2(n);
    for (int i = 0; i < n; ++i) {
        double rho = profile.rho0[i];
        r1[i] = std::abs(profile.drho0[i]) / std::pow(rho, 1.5);
        r2[i] = std::abs(profile.d2rho0[i]) / (rho * rho);
    }
    // half-domain index window: |y| <= L/2
    int qa = grid.N / 4, qb = 3 * grid.N / 4;
    DecayConstants d;
    d.K1 = sup_range(r1, 0, n - 1);
    d.K2 = sup_range(r2, 0, n - 1);
    double k1h = sup_range(r1, qa, qb);
    double k2h = sup_range(r2, qa, qb);
    d.K1_growth = (k1h > 0.0) ? d.K1 / k1h : 1.0;
    d.K2_growth = (k2h > 0.0) ? d.K2 / k2h : 1.0;
    return d;
}

void InitialData::record_J_bounds() {
    J_lower = *std::min_element(J0.begin(), J0.end());
    J_upper = *std::max_element(J0.begin(), J0.end());
}

void theta_from_entropy(const std::vector<double>& s0, const DensityProfile& profile,
                        const PhysParams& params, InitialData& initial) {
    const std::size_t n = profile.rho0.size();
    if (s0.size() != n) throw ParameterError("theta_from_entropy: s0/profile size mismatch");
    for (double s : s0) {
        if (!std::isfinite(s)) throw ParameterError("theta_from_entropy: s0 must be finite");
    }
    const double gm1 = params.gamma() - 1.0;
    initial.theta0.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        initial.theta0[i] =
            params.A / params.R * std::exp(s0[i] / params.c_v) * std::pow(profile.rho0[i], gm1);
    }
    initial.s0 = s0;
}

void bump_velocity(double amplitude, double width, const Grid& grid, InitialData& initial) {
    if (!(width > 0.0)) throw ParameterError("bump_velocity: width must be > 0");
    const int n = grid.size();
    initial.v0.assign(n, 0.0);
    initial.dv0 = std::vector<double>(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = grid.nodes[i] / width;
        double q = z * z - 1.0;
        if (q < 0.0) {
            double e = amplitude * std::exp(1.0 / q);
            initial.v0[i] = e;
            (*initial.dv0)[i] = -e * 2.0 * z / (width * q * q);
        }
    }
}

int AssumptionReport::failing_count() const {
    int c = 0;
    for (const auto& e : entries) {
        if (e.status != AssumptionStatus::Pass) ++c;
    }
    return c;
}

const AssumptionEntry* AssumptionReport::find(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

AssumptionReport check_assumptions(const DensityProfile& profile, const InitialData& initial,
                                   const Grid& grid, const PhysParams& params,
                                   double growth_threshold) {
    const int n = grid.size();
    const double h = grid.h;
    const double gam = params.gamma();
    AssumptionReport rep;

    auto minval = [](const std::vector<double>& f) {
        return *std::min_element(f.begin(), f.end());
    };

    rep.hard_reject = minval(profile.rho0) <= 0.0;

    int qa = grid.N / 4, qb = 3 * grid.N / 4; // |y| <= L/2 window

    auto add_sup = [&](const std::string& name, const std::vector<double>& f) {
        AssumptionEntry e;
        e.name = name;
        e.value = sup_range(f, 0, n - 1);
        double half = sup_range(f, qa, qb);
        e.growth_ratio = (half > 0.0) ? e.value / half : 1.0;
        e.status = (e.growth_ratio <= growth_threshold) ? AssumptionStatus::Pass
                                                        : AssumptionStatus::Diverging;
        rep.entries.push_back(e);
    };
    auto add_l2 = [&](const std::string& name, const std::vector<double>& w,
                      const std::vector<double>& f) {
        AssumptionEntry e;
        e.name = name;
        e.value = weighted_l2(h, w, f, 0, n - 1);
        double half = weighted_l2(h, w, f, qa, qb);
        e.growth_ratio = (half > 0.0) ? e.value / half : 1.0;
        e.status = (e.growth_ratio <= growth_threshold) ? AssumptionStatus::Pass
                                                        : AssumptionStatus::Diverging;
        rep.entries.push_back(e);
    };

    // sign conditions
    {
        AssumptionEntry e;
        e.name = "H0: inf rho0";
        e.value = minval(profile.rho0);
        e.status = rep.hard_reject ? AssumptionStatus::Fail : AssumptionStatus::Pass;
        rep.entries.push_back(e);

        AssumptionEntry t;
        t.name = "H0: inf theta0";
        t.value = minval(initial.theta0);
        t.status = (t.value >= 0.0) ? AssumptionStatus::Pass : AssumptionStatus::Fail;
        rep.entries.push_back(t);

        AssumptionEntry j;
        j.name = "H0: J0 bounds";
        j.value = initial.J_lower;
        j.status = (initial.J_lower > 0.0) ? AssumptionStatus::Pass : AssumptionStatus::Fail;
        rep.entries.push_back(j);
    }
    if (rep.hard_reject) return rep;

    std::vector<double> sqrt_rho(n), ones(n, 1.0);
    for (int i = 0; i < n; ++i) sqrt_rho[i] = std::sqrt(profile.rho0[i]);

    add_sup("H0: sup rho0", profile.rho0);
    add_sup("H0: sup |rho0'|", profile.drho0);

    std::vector<double> v0sq(n), dJ0 = diff1(h, initial.J0),
                        dv0 = initial.dv0 ? *initial.dv0 : diff1(h, initial.v0),
                        dth0 = diff1(h, initial.theta0);
    for (int i = 0; i < n; ++i) v0sq[i] = initial.v0[i] * initial.v0[i];
    add_l2("H0: ||sqrt(rho0) v0||_2", sqrt_rho, initial.v0);
    add_l2("H0: ||sqrt(rho0) v0^2||_2", sqrt_rho, v0sq);
    add_l2("H0: ||sqrt(rho0) theta0||_2", sqrt_rho, initial.theta0);
    add_l2("H0: ||sqrt(rho0) J0'||_2", sqrt_rho, dJ0);
    add_l2("H0: ||v0'||_2", ones, dv0);
    {
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = std::pow(profile.rho0[i], 1.5);
        add_l2("H0: ||rho0^{3/2} theta0'||_2", w, dth0);
    }

    {
        // (1/sqrt(rho0))' = -rho0'/(2 rho0^{3/2})
        std::vector<double> f(n);
        for (int i = 0; i < n; ++i) {
            f[i] = std::abs(profile.drho0[i]) / (2.0 * std::pow(profile.rho0[i], 1.5));
        }
        add_sup("H1: sup |(1/sqrt(rho0))'|", f);
    }
    {
        // (1/rho0)'' = (2 rho0'^2 - rho0 rho0'') / rho0^3
        std::vector<double> f(n);
        for (int i = 0; i < n; ++i) {
            double r = profile.rho0[i];
            f[i] = std::abs(2.0 * profile.drho0[i] * profile.drho0[i] - r * profile.d2rho0[i]) /
                   (r * r * r);
        }
        add_sup("H2: sup |(1/rho0)''|", f);
    }

    {
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = std::pow(profile.rho0[i], 0.5 * (1.0 - gam));
        add_l2("HS: ||rho0^{(1-gamma)/2} v0||_2", w, initial.v0);
        for (int i = 0; i < n; ++i) w[i] = std::pow(profile.rho0[i], 1.0 - 0.5 * gam);
        add_l2("HS: ||rho0^{1-gamma/2} theta0||_2", w, initial.theta0);
        std::vector<double> G0(n);
        for (int i = 0; i < n; ++i) {
            G0[i] = (params.mu * dv0[i] - params.R * profile.rho0[i] * initial.theta0[i]) /
                    initial.J0[i];
        }
        for (int i = 0; i < n; ++i) w[i] = std::pow(profile.rho0[i], -0.5 * gam);
        add_l2("HS: ||rho0^{-gamma/2} G0||_2", w, G0);
    }

    {
        AssumptionEntry e;
        e.name = "finite mass: ||rho0||_1";
        e.value = trapz(h, profile.rho0);
        double half = trapz_range(h, profile.rho0, qa, qb);
        e.growth_ratio = (half > 0.0) ? e.value / half : 1.0;
        e.status = (e.growth_ratio <= growth_threshold) ? AssumptionStatus::Pass
                                                        : AssumptionStatus::Diverging;
        rep.entries.push_back(e);
    }
    return rep;
}

EntropyLevelParams entropy_level_params(const InitialData& initial, const DecayConstants& decay,
                                        double J_lowerT, double J_upperT,
                                        const PhysParams& params) {
    if (!initial.s0) throw ParameterError("entropy_level_params: initial s0 is required");
    if (!(J_lowerT > 0.0)) throw ParameterError("entropy_level_params: J_lowerT must be > 0");
    if (J_lowerT > J_upperT) {
        throw ParameterError("entropy_level_params: J_lowerT exceeds J_upperT");
    }
    const double gam = params.gamma();
    EntropyLevelParams out;
    out.s_lower0 = *std::min_element(initial.s0->begin(), initial.s0->end());
    out.s_upper0 = *std::max_element(initial.s0->begin(), initial.s0->end());
    double AoR = params.A / params.R;
    out.ell_lower0 = std::log(std::min(1.0, AoR * std::exp(out.s_lower0 / params.c_v)) /
                              std::max(1.0, std::pow(2.0, gam - 2.0)));
    out.ell_upper0 = AoR * std::exp(out.s_upper0 / params.c_v);
    double pre = params.kappa * (gam - 1.0) / (params.c_v * J_lowerT);
    out.M_lower = pre * (decay.K1 * decay.K1 + decay.K2);
    out.M_upper = pre * (std::abs(gam - 2.0) * decay.K1 * decay.K1 + decay.K2);
    out.J_lowerT = J_lowerT;
    out.J_upperT = J_upperT;
    return out;
}

} // namespace nslab
