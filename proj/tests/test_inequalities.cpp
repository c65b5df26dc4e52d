#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nslab/inequalities.hpp"

using namespace nslab;

TEST_CASE("GaussianMixture: value and derivative closed forms") {
    GaussianMixture m;
    m.terms = {{2.0, 1.0, 0.5}, {0.7, -3.0, 2.0}};
    for (double y : {-4.0, -1.0, 0.0, 0.3, 2.5}) {
        double v = 2.0 * std::exp(-0.5 * std::pow((y - 1.0) / 0.5, 2)) +
                   0.7 * std::exp(-0.5 * std::pow((y + 3.0) / 2.0, 2));
        CHECK(m.value(y) == doctest::Approx(v).epsilon(1e-14));
        // derivative by central difference
        double h = 1e-6;
        double fd = (m.value(y + h) - m.value(y - h)) / (2.0 * h);
        CHECK(m.deriv(y) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("interpolation bound: f identically zero passes with zero slack terms") {
    Grid g = make_grid(20.0, 256, 0.125);
    InterpolationInstance inst;
    const int n = g.size();
    inst.omega.assign(n, 1.0);
    inst.domega.assign(n, 0.0);
    inst.eta.assign(n, 1.0);
    inst.f.assign(n, 0.0);
    inst.df.assign(n, 0.0);
    inst.K = 0.0;
    SlackReport r = check_sqrt_weight_bound(inst, g);
    CHECK(r.pass);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
}

TEST_CASE("interpolation bound: flat weight with a single Gaussian has positive slack") {
    Grid g = make_grid(20.0, 1024, 0.125);
    InterpolationInstance inst;
    const int n = g.size();
    inst.omega.assign(n, 1.0);
    inst.domega.assign(n, 0.0);
    inst.eta.assign(n, 1.0);
    inst.f.resize(n);
    inst.df.resize(n);
    for (int i = 0; i < n; ++i) {
        double y = g.nodes[i];
        inst.f[i] = std::exp(-0.5 * y * y);
        inst.df[i] = -y * inst.f[i];
    }
    inst.K = 0.0;
    SlackReport r = check_sqrt_weight_bound(inst, g);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12)); // sup f^2 at y = 0
    // K = 0 kills the first term; the second must carry the sup alone
    CHECK(r.slack > 0.0);
}

TEST_CASE("instance validation rejects inconsistent data") {
    Grid g = make_grid(5.0, 16, 0.125);
    std::mt19937_64 rng(1);
    InterpolationInstance inst = make_interp_instance(rng, g);
    CHECK_NOTHROW(inst.validate());
    InterpolationInstance bad = inst;
    bad.f[3] = -1.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = inst;
    bad.eta[0] = 0.0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = inst;
    bad.domega[2] = 10.0 * (1.0 + bad.K) * (bad.omega[2] + 1.0); // breaks |omega'| <= K omega
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = inst;
    bad.df.pop_back();
    CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("random instances never violate the interpolation bound") {
    Grid g = make_grid(30.0, 3000, 0.125);
    std::mt19937_64 rng(7);
    int worst_sign = 0;
    for (int k = 0; k < 200; ++k) {
        InterpolationInstance inst = make_interp_instance(rng, g);
        SlackReport r = check_sqrt_weight_bound(inst, g);
        CHECK(r.pass);
        if (r.slack < 0.0) ++worst_sign;
    }
    CHECK(worst_sign == 0);
}

TEST_CASE("weighted GN ratio: q = 2 collapses to exactly one half") {
    Grid g = make_grid(10.0, 512, 0.125);
    const int n = g.size();
    std::vector<double> rho(n), f(n), df(n);
    for (int i = 0; i < n; ++i) {
        double y = g.nodes[i];
        rho[i] = 1.0 / (1.0 + y * y);
        f[i] = std::exp(-0.1 * y * y);
        df[i] = -0.2 * y * f[i];
    }
    GnReport r = check_weighted_gn(rho, f, df, 1.0, 2.0, g);
    CHECK(r.ratio == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("weighted GN ratio: scale invariance and parameter errors") {
    Grid g = make_grid(10.0, 512, 0.125);
    const int n = g.size();
    std::vector<double> rho(n), f(n), df(n);
    for (int i = 0; i < n; ++i) {
        double y = g.nodes[i];
        rho[i] = std::exp(-0.05 * y * y) + 0.01;
        f[i] = 1.0 / (1.0 + 0.3 * y * y);
        df[i] = -0.6 * y * f[i] * f[i]; // -0.6 y / (1 + 0.3 y^2)^2
    }
    for (double q : {4.0, 6.0, std::numeric_limits<double>::infinity()}) {
        GnReport a = check_weighted_gn(rho, f, df, 0.75, q, g);
        std::vector<double> f3(f), df3(df);
        for (double& x : f3) x *= 3.0;
        for (double& x : df3) x *= 3.0;
        GnReport b = check_weighted_gn(rho, f3, df3, 0.75, q, g);
        CHECK(a.ratio > 0.0);
        CHECK(std::isfinite(a.ratio));
        CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-10));
    }
    CHECK_THROWS_AS(check_weighted_gn(rho, f, df, 0.0, 4.0, g), ParameterError);
    CHECK_THROWS_AS(check_weighted_gn(rho, f, df, 1.0, 1.5, g), ParameterError);
    std::vector<double> short_f(f.begin(), f.end() - 1);
    CHECK_THROWS_AS(check_weighted_gn(rho, short_f, df, 1.0, 4.0, g), ParameterError);
}

TEST_CASE("weighted GN ratio over a random family is bounded and refinement-stable") {
    std::mt19937_64 rng(11);
    auto family_max = [&](int N) {
        Grid g = make_grid(25.0, N, 0.125);
        std::mt19937_64 local(99);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            GaussianMixture fm = random_mixture(local, 3, 0.2, 1.5, 10.0, 1.0, 5.0);
            const int n = g.size();
            std::vector<double> rho(n), f(n), df(n);
            for (int i = 0; i < n; ++i) {
                double y = g.nodes[i];
                rho[i] = std::pow(1.0 + y * y, -1.0);
                f[i] = fm.value(y);
                df[i] = fm.deriv(y);
            }
            GnReport r = check_weighted_gn(rho, f, df, 1.0, 4.0, g);
            worst = std::max(worst, r.ratio);
        }
        return worst;
    };
    double m1 = family_max(2000);
    double m2 = family_max(4000);
    CHECK(m1 > 0.0);
    CHECK(m1 < 10.0); // bounded family ratio, no blow-up
    CHECK(std::abs(m1 - m2) <= 0.1 * m1);
    (void)rng;
}
