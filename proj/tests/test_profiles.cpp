#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nslab/diagnostics.hpp"
#include "nslab/profiles.hpp"

using namespace nslab;

namespace {

PhysParams ref_params() {
    PhysParams p;
    p.R = 2.0 / 3.0; // gamma = 5/3
    return p;
}

} // namespace

TEST_CASE("power law, ell = 0: constant profile with zero derivatives") {
    Grid g = make_grid(10.0, 64, 0.125);
    DensityProfile p = density_power_law(1.0, 0.0, g);
    CHECK(p.analytic_derivatives);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(p.rho0[i] == 1.0);
        CHECK(p.drho0[i] == 0.0);
        CHECK(p.d2rho0[i] == 0.0);
    }
}

TEST_CASE("power law, ell = 2 at the origin") {
    Grid g = make_grid(10.0, 64, 0.125);
    DensityProfile p = density_power_law(1.0, 2.0, g);
    int mid = g.N / 2;
    REQUIRE(g.nodes[mid] == 0.0);
    CHECK(p.rho0[mid] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.drho0[mid] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p.d2rho0[mid] == doctest::Approx(-2.0).epsilon(1e-14));
    // exact sampled form K <y>^{-ell}
    for (int i = 0; i < g.size(); ++i) {
        double y = g.nodes[i];
        CHECK(p.rho0[i] == doctest::Approx(std::pow(1.0 + y * y, -1.0)).epsilon(1e-14));
        CHECK(p.rho0[i] > 0.0);
    }
}

TEST_CASE("power law rejects nonpositive amplitude") {
    Grid g = make_grid(10.0, 64, 0.125);
    CHECK_THROWS_AS(density_power_law(0.0, 2.0, g), ParameterError);
    CHECK_THROWS_AS(density_power_law(-1.0, 2.0, g), ParameterError);
    CHECK_THROWS_AS(density_power_law(1.0, -0.5, g), ParameterError);
}

TEST_CASE("finite differences converge at order 2 to the analytic derivatives") {
    double e1[2], e2[2];
    int k = 0;
    for (int N : {256, 512}) {
        Grid g = make_grid(8.0, N, 0.125);
        DensityProfile p = density_power_law(1.5, 2.0, g);
        std::vector<double> d1 = diff1(g.h, p.rho0);
        std::vector<double> d2 = diff1(g.h, d1);
        double w1 = 0.0, w2 = 0.0;
        // interior only: the second difference is contaminated near the ends
        for (int i = 2; i < g.size() - 2; ++i) {
            w1 = std::max(w1, std::abs(d1[i] - p.drho0[i]));
            w2 = std::max(w2, std::abs(d2[i] - p.d2rho0[i]));
        }
        e1[k] = w1;
        e2[k] = w2;
        ++k;
    }
    CHECK(e1[0] / e1[1] > 3.0); // ~4 expected
    CHECK(e1[0] / e1[1] < 5.0);
    CHECK(e2[0] / e2[1] > 3.0);
    CHECK(e2[0] / e2[1] < 5.0);
}

TEST_CASE("decay constants: closed-form limits") {
    Grid g = make_grid(200.0, 8192, 0.125);
    SUBCASE("ell = 0 gives zero constants") {
        DecayConstants d = decay_constants(density_power_law(2.0, 0.0, g), g);
        CHECK(d.K1 == 0.0);
        CHECK(d.K2 == 0.0);
    }
    SUBCASE("ell = 2 saturates at K1 = 2, K2 = 6") {
        DecayConstants d = decay_constants(density_power_law(1.0, 2.0, g), g);
        CHECK(d.K1 == doctest::Approx(2.0).epsilon(1e-4));
        CHECK(d.K2 == doctest::Approx(6.0).epsilon(1e-3));
        CHECK(d.K1_growth == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(d.K2_growth == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("ell = 4 diverges: K1 doubles when the window doubles") {
        DecayConstants d = decay_constants(density_power_law(1.0, 4.0, g), g);
        // ratio |rho0'|/rho0^{3/2} = 4|y| <y>^{... } ~ 4|y| for K = 1
        CHECK(d.K1 == doctest::Approx(4.0 * 200.0).epsilon(1e-2));
        CHECK(d.K1_growth == doctest::Approx(2.0).epsilon(1e-2));
        CHECK(d.K2_growth == doctest::Approx(4.0).epsilon(5e-2));
    }
}

TEST_CASE("theta_from_entropy") {
    Grid g = make_grid(10.0, 128, 0.125);
    SUBCASE("s0 = 0, A = R: theta0 = rho0^{gamma-1}") {
        PhysParams pp = ref_params();
        pp.A = pp.R;
        DensityProfile p = density_power_law(1.0, 2.0, g);
        InitialData init;
        theta_from_entropy(std::vector<double>(g.size(), 0.0), p, pp, init);
        REQUIRE(init.s0.has_value());
        for (int i = 0; i < g.size(); ++i) {
            CHECK(init.theta0[i] ==
                  doctest::Approx(std::pow(p.rho0[i], pp.gamma() - 1.0)).epsilon(1e-14));
        }
    }
    SUBCASE("gamma = 2, rho0 = <y>^{-2}, A = R: theta0 = <y>^{-2}") {
        PhysParams pp; // R = c_v = A = 1, gamma = 2
        DensityProfile p = density_power_law(1.0, 2.0, g);
        InitialData init;
        theta_from_entropy(std::vector<double>(g.size(), 0.0), p, pp, init);
        for (int i = 0; i < g.size(); ++i) {
            CHECK(init.theta0[i] == doctest::Approx(p.rho0[i]).epsilon(1e-14));
        }
    }
    SUBCASE("shifting s0 by c_v log 2 doubles theta0") {
        PhysParams pp = ref_params();
        DensityProfile p = density_power_law(1.0, 2.0, g);
        InitialData a, b;
        theta_from_entropy(std::vector<double>(g.size(), 0.3), p, pp, a);
        theta_from_entropy(std::vector<double>(g.size(), 0.3 + pp.c_v * std::log(2.0)), p, pp,
                           b);
        for (int i = 0; i < g.size(); ++i) {
            CHECK(b.theta0[i] == doctest::Approx(2.0 * a.theta0[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("bump velocity: support, value, analytic derivative") {
    Grid g = make_grid(20.0, 512, 0.125);
    InitialData init;
    bump_velocity(0.5, 5.0, g, init);
    REQUIRE(init.dv0.has_value());
    int mid = g.N / 2;
    CHECK(init.v0[mid] == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
    for (int i = 0; i < g.size(); ++i) {
        if (std::abs(g.nodes[i]) >= 5.0) {
            CHECK(init.v0[i] == 0.0);
            CHECK((*init.dv0)[i] == 0.0);
        }
    }
    // analytic derivative against centered differences away from the support edge
    std::vector<double> fd = diff1(g.h, init.v0);
    for (int i = 1; i + 1 < g.size(); ++i) {
        if (std::abs(g.nodes[i]) < 4.0) {
            CHECK((*init.dv0)[i] == doctest::Approx(fd[i]).epsilon(5e-3));
        }
    }
}

TEST_CASE("record_J_bounds") {
    InitialData init;
    init.J0 = {0.5, 2.0, 1.0};
    init.record_J_bounds();
    CHECK(init.J_lower == 0.5);
    CHECK(init.J_upper == 2.0);
}

namespace {

InitialData reference_initial(const DensityProfile& p, const Grid& g, const PhysParams& pp) {
    InitialData init;
    init.J0.assign(g.size(), 1.0);
    bump_velocity(0.5, 5.0, g, init);
    theta_from_entropy(std::vector<double>(g.size(), 0.0), p, pp, init);
    init.record_J_bounds();
    return init;
}

} // namespace

TEST_CASE("assumption checker: slow decay passes, fast decay diverges, flat loses mass") {
    Grid g = make_grid(50.0, 1024, 0.125);
    PhysParams pp = ref_params();

    SUBCASE("ell = 2 admissible data: everything passes") {
        DensityProfile p = density_power_law(1.0, 2.0, g);
        AssumptionReport rep = check_assumptions(p, reference_initial(p, g, pp), g, pp);
        CHECK_FALSE(rep.hard_reject);
        CHECK(rep.failing_count() == 0);
        for (const auto& e : rep.entries) CHECK(e.status == AssumptionStatus::Pass);
    }
    SUBCASE("ell = 4: (H1)/(H2) diverge under domain doubling") {
        DensityProfile p = density_power_law(1.0, 4.0, g);
        AssumptionReport rep = check_assumptions(p, reference_initial(p, g, pp), g, pp);
        CHECK_FALSE(rep.hard_reject);
        const AssumptionEntry* h1 = rep.find("H1: sup |(1/sqrt(rho0))'|");
        const AssumptionEntry* h2 = rep.find("H2: sup |(1/rho0)''|");
        REQUIRE(h1 != nullptr);
        REQUIRE(h2 != nullptr);
        CHECK(h1->status == AssumptionStatus::Diverging);
        CHECK(h2->status == AssumptionStatus::Diverging);
        CHECK(h1->growth_ratio > 1.5);
        CHECK(h2->growth_ratio > 1.5);
    }
    SUBCASE("ell = 0: (H1)/(H2) fine but the mass quadrature grows with L") {
        DensityProfile p = density_power_law(1.0, 0.0, g);
        AssumptionReport rep = check_assumptions(p, reference_initial(p, g, pp), g, pp);
        const AssumptionEntry* h1 = rep.find("H1: sup |(1/sqrt(rho0))'|");
        const AssumptionEntry* mass = rep.find("finite mass: ||rho0||_1");
        REQUIRE(h1 != nullptr);
        REQUIRE(mass != nullptr);
        CHECK(h1->status == AssumptionStatus::Pass);
        CHECK(mass->status != AssumptionStatus::Pass);
        CHECK(mass->growth_ratio == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("interior vacuum is a hard reject") {
        DensityProfile p = density_power_law(1.0, 2.0, g);
        p.rho0[512] = 0.0;
        AssumptionReport rep = check_assumptions(p, reference_initial(p, g, pp), g, pp);
        CHECK(rep.hard_reject);
    }
}

TEST_CASE("entropy level parameters") {
    SUBCASE("gamma = 2, A = R, s0 = 0: ell_lower0 = 0 and ell_upper0 = 1") {
        PhysParams pp; // all ones, gamma = 2
        InitialData init;
        init.J0 = {1.0, 1.0, 1.0};
        init.s0 = std::vector<double>{0.0, 0.0, 0.0};
        DecayConstants dec{2.0, 6.0, 1.0, 1.0};
        EntropyLevelParams lp = entropy_level_params(init, dec, 1.0, 1.0, pp);
        CHECK(lp.ell_lower0 == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(lp.ell_upper0 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(lp.M_lower == doctest::Approx(10.0).epsilon(1e-14)); // (K1^2 + K2) = 10
        CHECK(lp.M_upper == doctest::Approx(6.0).epsilon(1e-14));  // |gamma-2| = 0
    }
    SUBCASE("missing s0 is a parameter error") {
        PhysParams pp;
        InitialData init;
        init.J0 = {1.0};
        DecayConstants dec;
        CHECK_THROWS_AS(entropy_level_params(init, dec, 1.0, 1.0, pp), ParameterError);
    }
    SUBCASE("reference parameters: ell_lower0 = 0, ell_upper0 = 1.5") {
        PhysParams pp = ref_params(); // A = 1, R = 2/3 -> A/R = 1.5, gamma = 5/3
        InitialData init;
        init.J0 = {1.0};
        init.s0 = std::vector<double>{0.0};
        DecayConstants dec{2.0, 6.0, 1.0, 1.0};
        EntropyLevelParams lp = entropy_level_params(init, dec, 1.0, 1.0, pp);
        // min{1, 1.5} / max{1, 2^{-1/3}} = 1
        CHECK(lp.ell_lower0 == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(lp.ell_upper0 == doctest::Approx(1.5).epsilon(1e-15));
    }
}

TEST_CASE("initial entropy is recovered by the entropy diagnostic") {
    Grid g = make_grid(30.0, 600, 0.125);
    PhysParams pp = ref_params();
    DensityProfile p = density_power_law(1.0, 2.0, g);
    InitialData init;
    init.J0.assign(g.size(), 1.0);
    std::vector<double> s0(g.size());
    for (int i = 0; i < g.size(); ++i) s0[i] = 0.2 * std::sin(0.3 * g.nodes[i]);
    theta_from_entropy(s0, p, pp, init);

    SimState st;
    st.J = init.J0;
    st.v.assign(g.size(), 0.0);
    st.theta = init.theta0;
    EntropyField ent = entropy_field(st, p, g, pp);
    for (int i = 0; i < g.size(); ++i) {
        REQUIRE_FALSE(ent.masked[i]);
        CHECK(std::abs(ent.s[i] - s0[i]) <= 1e-10);
    }
}

TEST_CASE("tabulated profile: interpolation, approximate derivatives, v0 column") {
    Grid g = make_grid(5.0, 128, 0.125);
    const char* path = "table_profile_test.txt";
    {
        std::ofstream f(path);
        for (int k = -300; k <= 300; ++k) {
            double y = 0.02 * k; // covers [-6, 6]
            f << y << " " << std::pow(1.0 + y * y, -1.0) << " " << std::sin(y) << "\n";
        }
    }
    std::vector<double> v0;
    DensityProfile p = density_from_table(path, g, &v0);
    CHECK_FALSE(p.analytic_derivatives);
    DensityProfile exact = density_power_law(1.0, 2.0, g);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(p.rho0[i] == doctest::Approx(exact.rho0[i]).epsilon(1e-6));
        CHECK(v0[i] == doctest::Approx(std::sin(g.nodes[i])).epsilon(1e-5));
    }
    for (int i = 4; i < g.size() - 4; ++i) {
        CHECK(p.drho0[i] == doctest::Approx(exact.drho0[i]).epsilon(1e-3));
    }
    std::remove(path);

    SUBCASE("rejects non-increasing y") {
        std::ofstream f(path);
        f << "0 1\n0 1\n1 1\n2 1\n";
        f.close();
        CHECK_THROWS_AS(density_from_table(path, g), ParameterError);
        std::remove(path);
    }
    SUBCASE("rejects tables not covering the grid") {
        std::ofstream f(path);
        f << "-1 1\n0 1\n1 1\n2 1\n";
        f.close();
        CHECK_THROWS_AS(density_from_table(path, g), ParameterError);
        std::remove(path);
    }
}

TEST_CASE("tail mass of the power-law family") {
    Grid g = make_grid(50.0, 256, 0.125);
    DensityProfile p2 = density_power_law(1.0, 2.0, g);
    // 2 K L^{1-ell}/(ell-1) = 2/L, close to the exact 2(pi/2 - atan L)
    CHECK(p2.tail_mass(50.0) == doctest::Approx(2.0 / 50.0).epsilon(1e-12));
    CHECK(p2.tail_mass(50.0) ==
          doctest::Approx(2.0 * (M_PI / 2.0 - std::atan(50.0))).epsilon(1e-3));
    DensityProfile p1 = density_power_law(1.0, 1.0, g);
    CHECK(std::isinf(p1.tail_mass(50.0)));
    DensityProfile p0 = density_power_law(1.0, 0.0, g);
    CHECK(std::isinf(p0.tail_mass(50.0)));
}
