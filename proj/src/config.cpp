#include "nslab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace nslab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& val) {
    std::string v = trim(val);
    if (v == "inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for key '" + key + "': '" + v + "'");
    }
}

long parse_int(const std::string& key, const std::string& val) {
    std::string v = trim(val);
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for key '" + key + "': '" + v + "'");
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& val) {
    std::vector<double> out;
    std::string v = trim(val);
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_double(key, tok));
    return out;
}

} // namespace

std::string canonical_config(const RunConfig& c) {
    std::string s;
    auto kv = [&](const char* k, const std::string& v) {
        s += k;
        s += " = ";
        s += v;
        s += "\n";
    };
    s += "[physics]\n";
    kv("mu", format_double(c.physics.mu));
    kv("kappa", format_double(c.physics.kappa));
    kv("R", format_double(c.physics.R));
    kv("c_v", format_double(c.physics.c_v));
    kv("A", format_double(c.physics.A));
    s += "[profile]\n";
    kv("family", c.profile_family);
    kv("K_rho", format_double(c.K_rho));
    kv("ell_rho", format_double(c.ell_rho));
    kv("table", c.table_path);
    s += "[initial]\n";
    kv("v0_family", c.v0_family);
    kv("v0_amplitude", format_double(c.v0_amplitude));
    kv("v0_width", format_double(c.v0_width));
    kv("s0", format_double(c.s0_const));
    kv("J0", format_double(c.J0_const));
    s += "[grid]\n";
    kv("L", format_double(c.L));
    kv("N", std::to_string(c.N));
    kv("buffer_fraction", format_double(c.buffer_fraction));
    s += "[control]\n";
    kv("dt_init", format_double(c.control.dt_init));
    kv("dt_min", format_double(c.control.dt_min));
    kv("safety", format_double(c.control.safety));
    kv("max_retries", std::to_string(c.control.max_retries));
    kv("reaction_cap", format_double(c.control.reaction_cap));
    kv("dt_max", format_double(c.control.dt_max));
    kv("growth", format_double(c.control.growth));
    s += "[run]\n";
    kv("T", format_double(c.T));
    kv("epsilon", format_double(c.epsilon));
    // out_dir is deliberately omitted: the hash identifies the experiment,
    // not where its artifacts land
    kv("seed", std::to_string(c.seed));
    kv("snapshots", join_doubles(c.snapshots));
    s += "[ladder]\n";
    kv("count", std::to_string(c.ladder_count));
    kv("lower_span", format_double(c.ladder_lower_span));
    kv("upper_span_factor", format_double(c.ladder_upper_span_factor));
    return s;
}

std::string config_hash(const RunConfig& cfg) {
    char buf[17];
    std::uint64_t h = fnv1a(canonical_config(cfg));
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::set<std::string> seen;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            }
            section = line.substr(1, line.size() - 2);
            static const std::set<std::string> sections = {
                "physics", "profile", "initial", "grid", "control", "run", "ladder"};
            if (!sections.count(section)) throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section + "." + key;
        if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'");

        if (full == "physics.mu") c.physics.mu = parse_double(full, val);
        else if (full == "physics.kappa") c.physics.kappa = parse_double(full, val);
        else if (full == "physics.R") c.physics.R = parse_double(full, val);
        else if (full == "physics.c_v") c.physics.c_v = parse_double(full, val);
        else if (full == "physics.A") c.physics.A = parse_double(full, val);
        else if (full == "profile.family") c.profile_family = val;
        else if (full == "profile.K_rho") c.K_rho = parse_double(full, val);
        else if (full == "profile.ell_rho") c.ell_rho = parse_double(full, val);
        else if (full == "profile.table") c.table_path = val;
        else if (full == "initial.v0_family") c.v0_family = val;
        else if (full == "initial.v0_amplitude") c.v0_amplitude = parse_double(full, val);
        else if (full == "initial.v0_width") c.v0_width = parse_double(full, val);
        else if (full == "initial.s0") c.s0_const = parse_double(full, val);
        else if (full == "initial.J0") c.J0_const = parse_double(full, val);
        else if (full == "grid.L") c.L = parse_double(full, val);
        else if (full == "grid.N") c.N = static_cast<int>(parse_int(full, val));
        else if (full == "grid.buffer_fraction") c.buffer_fraction = parse_double(full, val);
        else if (full == "control.dt_init") c.control.dt_init = parse_double(full, val);
        else if (full == "control.dt_min") c.control.dt_min = parse_double(full, val);
        else if (full == "control.safety") c.control.safety = parse_double(full, val);
        else if (full == "control.max_retries")
            c.control.max_retries = static_cast<int>(parse_int(full, val));
        else if (full == "control.reaction_cap") c.control.reaction_cap = parse_double(full, val);
        else if (full == "control.dt_max") c.control.dt_max = parse_double(full, val);
        else if (full == "control.growth") c.control.growth = parse_double(full, val);
        else if (full == "run.T") c.T = parse_double(full, val);
        else if (full == "run.epsilon") c.epsilon = parse_double(full, val);
        else if (full == "run.out_dir") c.out_dir = val;
        else if (full == "run.seed") c.seed = static_cast<std::uint64_t>(parse_int(full, val));
        else if (full == "run.snapshots") c.snapshots = parse_double_list(full, val);
        else if (full == "ladder.count") c.ladder_count = static_cast<int>(parse_int(full, val));
        else if (full == "ladder.lower_span") c.ladder_lower_span = parse_double(full, val);
        else if (full == "ladder.upper_span_factor")
            c.ladder_upper_span_factor = parse_double(full, val);
        else throw ConfigError("unknown key '" + full + "'");
    }

    if (c.profile_family != "power_law" && c.profile_family != "table") {
        throw ConfigError("unknown value for key 'profile.family': '" + c.profile_family + "'");
    }
    if (c.v0_family != "bump" && c.v0_family != "zero" && c.v0_family != "table") {
        throw ConfigError("unknown value for key 'initial.v0_family': '" + c.v0_family + "'");
    }
    if (c.profile_family == "table" && c.table_path.empty()) {
        throw ConfigError("key 'profile.table' required when profile.family = table");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

bool is_sweep_axis(const std::string& axis) {
    return axis == "ell_rho" || axis == "L" || axis == "N" || axis == "gamma" || axis == "T" ||
           axis == "epsilon";
}

void set_sweep_axis(RunConfig& cfg, const std::string& axis, double value) {
    if (axis == "ell_rho") cfg.ell_rho = value;
    else if (axis == "L") cfg.L = value;
    else if (axis == "N") cfg.N = static_cast<int>(value);
    else if (axis == "gamma") cfg.physics.R = cfg.physics.c_v * (value - 1.0);
    else if (axis == "T") cfg.T = value;
    else if (axis == "epsilon") cfg.epsilon = value;
    else throw ConfigError("unknown sweep axis '" + axis + "'");
}

} // namespace nslab
