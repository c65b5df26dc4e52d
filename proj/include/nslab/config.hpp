#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nslab/core.hpp"
#include "nslab/solver.hpp"

namespace nslab {

/// Full description of one experiment. Round-trips losslessly through the
/// sectioned key = value text format; the FNV-1a hash of the canonical
/// serialization is stamped into every output artifact.
struct RunConfig {
    PhysParams physics;

    // [profile]
    std::string profile_family = "power_law"; // or "table"
    double K_rho = 1.0;
    double ell_rho = 2.0;
    std::string table_path;

    // [initial]
    std::string v0_family = "bump"; // "bump", "zero", or "table"
    double v0_amplitude = 0.5;
    double v0_width = 5.0;
    double s0_const = 0.0;
    double J0_const = 1.0;

    // [grid]
    double L = 50.0;
    int N = 2048;
    double buffer_fraction = 0.125;

    StepControl control;

    // [run]
    double T = 0.5;
    double epsilon = 1e-10;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::vector<double> snapshots; // extra output times; empty means {0, T}

    // [ladder]
    int ladder_count = 33;
    double ladder_lower_span = 20.0;
    double ladder_upper_span_factor = 20.0;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

std::uint64_t fnv1a(const std::string& text);

/// Every key in a fixed order, floats in shortest round-trip form.
std::string canonical_config(const RunConfig& cfg);

/// Hex FNV-1a of the canonical serialization.
std::string config_hash(const RunConfig& cfg);

/// Parse the text format. Unknown sections or keys, duplicate keys, and
/// malformed values all raise ConfigError naming the offender.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

/// Scalar axes a sweep may vary: ell_rho, L, N, gamma, T, epsilon.
/// gamma is applied by setting R = c_v (gamma - 1).
void set_sweep_axis(RunConfig& cfg, const std::string& axis, double value);

bool is_sweep_axis(const std::string& axis);

} // namespace nslab
