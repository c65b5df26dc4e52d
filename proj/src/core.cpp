#include "nslab/core.hpp"

#include <algorithm>
#include <string>

namespace nslab {

void PhysParams::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0)) {
            throw ParameterError(std::string("PhysParams: ") + name + " must be > 0");
        }
    };
    positive(mu, "mu");
    positive(kappa, "kappa");
    positive(R, "R");
    positive(c_v, "c_v");
    positive(A, "A");
}

int Grid::buffer_lo() const {
    double cut = 2.0 * L * buffer_fraction;
    int i = 0;
    while (i <= N && nodes[i] < -L + cut - 1e-12 * L) ++i;
    return i;
}

int Grid::buffer_hi() const {
    double cut = 2.0 * L * buffer_fraction;
    int i = N;
    while (i >= 0 && nodes[i] > L - cut + 1e-12 * L) --i;
    return i + 1;
}

Grid make_grid(double L, int N, double buffer_fraction) {
    if (!(L > 0.0)) throw ParameterError("make_grid: L must be > 0");
    if (N < 8) throw ParameterError("make_grid: N must be >= 8");
    if (N % 2 != 0) throw ParameterError("make_grid: N must be even");
    if (!(buffer_fraction >= 0.0 && buffer_fraction < 0.5)) {
        throw ParameterError("make_grid: buffer_fraction must lie in [0, 1/2)");
    }
    Grid g;
    g.L = L;
    g.N = N;
    g.h = 2.0 * L / N;
    g.buffer_fraction = buffer_fraction;
    g.nodes.resize(N + 1);
    for (int i = 0; i <= N; ++i) g.nodes[i] = -L + i * g.h;
    g.nodes[0] = -L;
    g.nodes[N] = L;
    return g;
}

bool SimState::satisfies_invariants() const {
    for (double x : J) {
        if (!(x > 0.0)) return false;
    }
    for (double x : theta) {
        if (!(x >= 0.0)) return false;
    }
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n) {
        throw ParameterError("solve_tridiagonal: array length mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double lo = (i == 0) ? 0.0 : std::abs(lower[i]);
        double up = (i + 1 == n) ? 0.0 : std::abs(upper[i]);
        if (!(std::abs(diag[i]) >= lo + up)) {
            throw NumericalError("solve_tridiagonal: diagonal dominance violated at row " +
                                 std::to_string(i));
        }
    }
    std::vector<double> c(n), d(n), x(n);
    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
        throw NumericalError("solve_tridiagonal: bad pivot at row 0");
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("solve_tridiagonal: bad pivot at row " + std::to_string(i));
        }
        c[i] = (i + 1 < n) ? upper[i] / pivot : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

double trapz(double h, const std::vector<double>& f) {
    return trapz_range(h, f, 0, static_cast<int>(f.size()) - 1);
}

double trapz_range(double h, const std::vector<double>& f, int i0, int i1) {
    if (i1 <= i0) return 0.0;
    double s = 0.5 * (f[i0] + f[i1]);
    for (int i = i0 + 1; i < i1; ++i) s += f[i];
    return s * h;
}

std::vector<double> cumtrapz(double h, const std::vector<double>& f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    }
    return out;
}

std::vector<double> diff1(double h, const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d(n);
    if (n < 3) throw ParameterError("diff1: need at least 3 nodes");
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (int i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

double max_abs(const std::vector<double>& f) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

} // namespace nslab
