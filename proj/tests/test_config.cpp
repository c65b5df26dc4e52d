#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "nslab/config.hpp"

using namespace nslab;

TEST_CASE("format_double: shortest round-trip forms") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        double x = u(rng) * std::pow(10.0, (int)(k % 13) - 6);
        CHECK(std::stod(format_double(x)) == x); // bit-exact round trip
    }
}

TEST_CASE("fnv1a: reference values") {
    CHECK(fnv1a("") == 1469598103934665603ull);
    CHECK(fnv1a("a") != fnv1a("b"));
    CHECK(fnv1a("abc") == fnv1a("abc"));
}

TEST_CASE("canonical serialization round-trips through the parser") {
    RunConfig c;
    c.physics.R = 2.0 / 3.0;
    c.L = 37.5;
    c.N = 1024;
    c.T = 0.25;
    c.control.dt_max = 0.125;
    c.snapshots = {0.1, 0.2};
    c.seed = 42;
    std::string text = canonical_config(c);
    RunConfig back = parse_config(text);
    CHECK(canonical_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);

    // hash is sensitive to every value
    RunConfig d = c;
    d.N = 2048;
    CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("defaults round-trip and hash is stable across calls") {
    RunConfig c;
    std::string h1 = config_hash(c);
    std::string h2 = config_hash(parse_config(canonical_config(c)));
    CHECK(h1 == h2);
}

TEST_CASE("parser errors name the offending section and key") {
    RunConfig c;
    std::string base = canonical_config(c);
    CHECK_THROWS_WITH_AS(parse_config(base + "[bogus]\nx = 1\n"), doctest::Contains("bogus"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(base + "[grid]\nwidth = 3\n"), doctest::Contains("width"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(base + "[grid]\nL = 60\n"), doctest::Contains("L"),
                         ConfigError); // duplicate key
    CHECK_THROWS_WITH_AS(parse_config("[grid]\nN = twelve\n"), doctest::Contains("N"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[grid]\nL = 1.5x\n"), doctest::Contains("L"), ConfigError);
    CHECK_THROWS_AS(parse_config("[profile]\nfamily = exotic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[profile]\nfamily = table\n"), ConfigError); // path required
    CHECK_THROWS_AS(parse_config("no section header\n"), ConfigError);
}

TEST_CASE("parser accepts comments, blank lines, and inf values") {
    std::string text = "# experiment\n"
                       "[grid]\n"
                       "\n"
                       "L = 25\n"
                       "N = 512\n"
                       "[control]\n"
                       "dt_max = inf\n";
    RunConfig c = parse_config(text);
    CHECK(c.L == 25.0);
    CHECK(c.N == 512);
    CHECK(std::isinf(c.control.dt_max));
    // untouched keys keep their defaults
    CHECK(c.T == 0.5);
    CHECK(c.profile_family == "power_law");
}

TEST_CASE("sweep axes") {
    for (const char* axis : {"ell_rho", "L", "N", "gamma", "T", "epsilon"}) {
        CHECK(is_sweep_axis(axis));
    }
    CHECK_FALSE(is_sweep_axis("mu"));

    RunConfig c;
    set_sweep_axis(c, "ell_rho", 4.0);
    CHECK(c.ell_rho == 4.0);
    set_sweep_axis(c, "N", 4096.0);
    CHECK(c.N == 4096);
    set_sweep_axis(c, "gamma", 2.0); // applied through R = c_v (gamma - 1)
    CHECK(c.physics.R == doctest::Approx(c.physics.c_v * 1.0).epsilon(1e-15));
    CHECK(c.physics.gamma() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(set_sweep_axis(c, "mu", 1.0), ConfigError);
}
