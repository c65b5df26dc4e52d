#include "nslab/cli.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "nslab/config.hpp"
#include "nslab/degiorgi.hpp"
#include "nslab/inequalities.hpp"
#include "nslab/runner.hpp"

namespace nslab {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVacuum = 3;
constexpr int kExitAbort = 4;
constexpr int kExitNumerical = 5;

struct CellOutcome {
    int exit_code = kExitOk;
    std::string error;
    bool has_result = false;
    // scalars lifted from the summary for the combined sweep table
    std::string hash;
    double E0 = 0.0, drift = 0.0, J_residual = 0.0;
    double s_min = 0.0, s_max = 0.0;
    double ZJ = 0.0, Ztheta = 0.0, ZG = 0.0;
    std::optional<double> q_vanish, Q_vanish;
};

CellOutcome run_cell(const RunConfig& cfg, const std::string& out_dir) {
    CellOutcome out;
    try {
        RunResult res = run_experiment(cfg);
        write_artifacts(res, out_dir);
        out.hash = res.hash;
        if (res.vacuum_reject) {
            out.exit_code = kExitVacuum;
            out.error = "interior vacuum in rho0";
            return out;
        }
        out.has_result = true;
        out.E0 = res.E0;
        out.drift = res.max_energy_drift;
        out.J_residual = res.max_J_residual;
        if (!res.series.empty()) {
            out.s_min = res.series.back().s_min;
            out.s_max = res.series.back().s_max;
        }
        if (!res.ZJ_series.empty()) {
            out.ZJ = res.ZJ_series.back();
            out.Ztheta = res.Zt_series.back();
            out.ZG = res.ZG_series.back();
        }
        out.q_vanish = res.q_vanish;
        out.Q_vanish = res.Q_vanish;
    } catch (const ConfigError& e) {
        out.exit_code = kExitConfig;
        out.error = e.what();
    } catch (const ParameterError& e) {
        out.exit_code = kExitConfig;
        out.error = e.what();
    } catch (const SolverAbort& e) {
        out.exit_code = kExitAbort;
        out.error = e.what();
    } catch (const NumericalError& e) {
        out.exit_code = kExitNumerical;
        out.error = e.what();
    } catch (const Error& e) {
        out.exit_code = kExitNumerical;
        out.error = e.what();
    }
    return out;
}

std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::string opt_str(const std::optional<double>& x) {
    return x ? format_double(*x) : std::string();
}

// ---- verification suites ----

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    int count = 0;
    int violations = 0;
    nlohmann::json items = nlohmann::json::array();
};

void note(SuiteReport& rep, bool pass, nlohmann::json item) {
    if (!pass) {
        ++rep.violations;
        if (rep.items.size() < 20) rep.items.push_back(std::move(item));
    }
}

SuiteReport suite_lemma_iteration(std::uint64_t seed, int count) {
    SuiteReport rep{"lemma-iteration", seed, count};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
        SyntheticFamily fam = make_synthetic_family(rng, true);
        HypothesisReport hr = verify_hypothesis(fam.levels, fam.f, fam.hyp);
        double d = iteration_gap(fam.hyp);
        bool conclusion = true;
        for (std::size_t k = 0; k < fam.levels.size(); ++k) {
            if (fam.levels[k] >= fam.hyp.m0 + d && fam.f[k] != 0.0) conclusion = false;
        }
        bool pass = hr.pass && conclusion && d >= 2.0;
        note(rep, pass,
             {{"index", i},
              {"mode", "satisfy"},
              {"hypothesis_pass", hr.pass},
              {"worst_ratio", hr.worst_ratio},
              {"gap", d},
              {"cutoff", fam.cutoff},
              {"conclusion", conclusion}});
        // a violating construction must be caught by brute force
        SyntheticFamily bad = make_synthetic_family(rng, false);
        HypothesisReport hb = verify_hypothesis(bad.levels, bad.f, bad.hyp);
        note(rep, !hb.pass,
             {{"index", i},
              {"mode", "violate"},
              {"hypothesis_pass", hb.pass},
              {"worst_ratio", hb.worst_ratio}});
    }
    return rep;
}

SuiteReport suite_lemma_interp(std::uint64_t seed, int count) {
    SuiteReport rep{"lemma-interp", seed, count};
    std::mt19937_64 rng(seed);
    Grid grid = make_grid(30.0, 3000, 0.125);
    for (int i = 0; i < count; ++i) {
        InterpolationInstance inst = make_interp_instance(rng, grid);
        SlackReport sr = check_sqrt_weight_bound(inst, grid);
        note(rep, sr.pass,
             {{"index", i}, {"lhs", sr.lhs}, {"rhs", sr.rhs}, {"slack", sr.slack}});
    }
    return rep;
}

SuiteReport suite_lemma_gn(std::uint64_t seed, int count) {
    SuiteReport rep{"lemma-gn", seed, count};
    std::mt19937_64 rng(seed);
    const double gam = 5.0 / 3.0;
    const double sigmas[] = {-gam / 2.0, 1.0 - gam / 2.0, 1.0 - gam};
    const double qs[] = {4.0, 6.0, 8.0, std::numeric_limits<double>::infinity()};

    std::vector<GaussianMixture> fs;
    std::vector<double> sig, qq;
    std::uniform_int_distribution<int> si(0, 2), qi(0, 3);
    for (int i = 0; i < count; ++i) {
        fs.push_back(random_mixture(rng, 1 + static_cast<int>(i % 4), -2.0, 2.0, 12.0, 0.8, 5.0));
        sig.push_back(sigmas[si(rng)]);
        qq.push_back(qs[qi(rng)]);
    }
    auto family_max = [&](int N) {
        Grid grid = make_grid(30.0, N, 0.125);
        DensityProfile prof = density_power_law(1.0, 2.0, grid);
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            std::vector<double> f(grid.size()), df(grid.size());
            for (int k = 0; k < grid.size(); ++k) {
                f[k] = fs[i].value(grid.nodes[k]);
                df[k] = fs[i].deriv(grid.nodes[k]);
            }
            GnReport gr = check_weighted_gn(prof.rho0, f, df, sig[i], qq[i], grid);
            worst = std::max(worst, gr.ratio);
        }
        return worst;
    };
    double a = family_max(2000), b = family_max(4000);
    bool stable = std::abs(a - b) <= 0.10 * std::max(a, b);
    note(rep, stable, {{"max_ratio_N", a}, {"max_ratio_2N", b}});
    rep.items.push_back({{"max_ratio_N", a}, {"max_ratio_2N", b}, {"stable", stable}});
    return rep;
}

SuiteReport suite_solver_units(std::uint64_t seed, int) {
    SuiteReport rep{"solver-units", seed, 3};

    { // uniform state is a fixed point of the step
        RunConfig cfg;
        cfg.ell_rho = 0.0;
        cfg.v0_family = "zero";
        cfg.L = 10.0;
        cfg.N = 256;
        Grid grid;
        DensityProfile prof;
        InitialData init;
        build_inputs(cfg, grid, prof, init);
        SolverSetup setup = make_setup(cfg.physics, prof, grid, init);
        SimState st;
        st.J = init.J0;
        st.v = init.v0;
        st.theta = init.theta0;
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            StepResult res = step(st, 1e-3, setup);
            if (!res.accepted) {
                worst = std::numeric_limits<double>::infinity();
                break;
            }
            for (int i = 0; i < grid.size(); ++i) {
                worst = std::max({worst, std::abs(res.state.J[i] - init.J0[i]),
                                  std::abs(res.state.v[i] - init.v0[i]),
                                  std::abs(res.state.theta[i] - init.theta0[i])});
            }
            st = std::move(res.state);
        }
        note(rep, worst <= 1e-12, {{"check", "uniform-fixed-point"}, {"max_change", worst}});
    }
    { // tridiagonal solve against direct residual
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int n = 200;
        std::vector<double> lo(n), di(n), up(n), rhs(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = (i > 0) ? u(rng) : 0.0;
            up[i] = (i + 1 < n) ? u(rng) : 0.0;
            di[i] = 3.0 + std::abs(lo[i]) + std::abs(up[i]);
            rhs[i] = u(rng);
        }
        std::vector<double> x = solve_tridiagonal(lo, di, up, rhs);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = di[i] * x[i] - rhs[i];
            if (i > 0) r += lo[i] * x[i - 1];
            if (i + 1 < n) r += up[i] * x[i + 1];
            worst = std::max(worst, std::abs(r));
        }
        note(rep, worst <= 1e-12, {{"check", "tridiagonal-residual"}, {"residual", worst}});
    }
    { // short reference run keeps its invariants
        RunConfig cfg;
        cfg.N = 256;
        cfg.L = 25.0;
        cfg.T = 0.05;
        RunResult res = run_experiment(cfg);
        bool ok = !res.vacuum_reject && res.J_min > 0.0 && res.max_energy_drift < 0.05;
        note(rep, ok,
             {{"check", "smoke-run"},
              {"J_min", res.J_min},
              {"drift", res.max_energy_drift}});
    }
    return rep;
}

int emit_suite(const SuiteReport& rep, const std::string& out_path) {
    nlohmann::json j;
    j["suite"] = rep.suite;
    j["seed"] = rep.seed;
    j["count"] = rep.count;
    j["violations"] = rep.violations;
    j["failures"] = rep.items;
    if (!out_path.empty()) {
        std::filesystem::create_directories(out_path);
        std::ofstream f(std::filesystem::path(out_path) / (rep.suite + ".json"),
                        std::ios::binary);
        f << j.dump(2) << "\n";
    }
    std::cout << "suite " << rep.suite << ": " << rep.violations << " violations out of "
              << rep.count << " cases\n";
    if (rep.violations > 0) std::cout << j.dump(2) << "\n";
    return rep.violations == 0 ? kExitOk : kExitViolation;
}

void parallel_cells(int workers, int cells, const std::function<void(int)>& body) {
    workers = std::max(1, std::min(workers, cells));
    if (workers == 1) {
        for (int i = 0; i < cells; ++i) body(i);
        return;
    }
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = cursor.fetch_add(1); i < cells; i = cursor.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"1D heat-conductive compressible flow laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed = 1234;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", config_path, "config file path")
                      ->envname("NSLAB_CONFIG");
        if (need_config) c->required();
        sub->add_option("--out", out_dir, "output directory")->envname("NSLAB_OUT");
        sub->add_option("--workers", workers, "concurrent cells")->envname("NSLAB_WORKERS");
        sub->add_option("--seed", seed, "base RNG seed")->envname("NSLAB_SEED");
    };

    auto* cmd_run = app.add_subcommand("run", "one experiment");
    add_common(cmd_run, true);

    auto* cmd_sweep = app.add_subcommand("sweep", "vary one scalar axis");
    add_common(cmd_sweep, true);
    std::string axis, values_text;
    cmd_sweep->add_option("--axis", axis, "ell_rho | L | N | gamma | T | epsilon")->required();
    cmd_sweep->add_option("--values", values_text, "comma-separated values")->required();

    auto* cmd_verify = app.add_subcommand("verify", "property suites");
    add_common(cmd_verify, false);
    std::string suite;
    int count = 0;
    cmd_verify->add_option("suite", suite,
                           "lemma-iteration | lemma-interp | lemma-gn | solver-units")
        ->required();
    cmd_verify->add_option("--count", count, "instances (0 = suite default)");

    auto* cmd_check = app.add_subcommand("check-profile", "assumption checker only");
    add_common(cmd_check, true);

    auto* cmd_conv = app.add_subcommand("convergence", "N-doubling preset");
    add_common(cmd_conv, true);
    int levels_count = 3;
    cmd_conv->add_option("--levels", levels_count, "number of N doublings (inclusive)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (app.got_subcommand(cmd_run)) {
            RunConfig cfg = load_config(config_path);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            CellOutcome out = run_cell(cfg, cfg.out_dir);
            if (out.exit_code != kExitOk) {
                std::cerr << "run failed (" << out.exit_code << "): " << out.error << "\n";
            } else {
                std::cout << "run ok: " << cfg.out_dir << "/summary.json (config " << out.hash
                          << ")\n";
            }
            return out.exit_code;
        }

        if (app.got_subcommand(cmd_sweep)) {
            RunConfig base = load_config(config_path);
            if (!is_sweep_axis(axis)) {
                std::cerr << "unknown sweep axis '" << axis << "'\n";
                return kExitConfig;
            }
            std::vector<double> values;
            try {
                values = split_doubles(values_text);
            } catch (const std::exception&) {
                std::cerr << "bad --values list\n";
                return kExitConfig;
            }
            if (values.empty()) {
                std::cerr << "empty --values list\n";
                return kExitConfig;
            }
            std::string root = out_dir.empty() ? base.out_dir : out_dir;
            std::vector<CellOutcome> cells(values.size());
            std::vector<RunConfig> cfgs(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) {
                cfgs[i] = base;
                set_sweep_axis(cfgs[i], axis, values[i]);
                cfgs[i].out_dir =
                    root + "/" + axis + "_" + format_double(values[i]);
            }
            parallel_cells(workers, static_cast<int>(values.size()), [&](int i) {
                cells[i] = run_cell(cfgs[i], cfgs[i].out_dir);
            });

            std::filesystem::create_directories(root);
            std::ofstream f(std::filesystem::path(root) / "sweep.csv", std::ios::binary);
            f << "# axis " << axis << "\n";
            f << "value,exit,config_hash,E0,max_energy_drift,max_J_residual,s_min_final,"
                 "s_max_final,ZJ,Ztheta,ZG,q_vanishing_level,Q_vanishing_level\n";
            for (std::size_t i = 0; i < values.size(); ++i) {
                const CellOutcome& c = cells[i];
                f << format_double(values[i]) << ',' << c.exit_code << ',' << c.hash << ',';
                if (c.has_result) {
                    f << format_double(c.E0) << ',' << format_double(c.drift) << ','
                      << format_double(c.J_residual) << ',' << format_double(c.s_min) << ','
                      << format_double(c.s_max) << ',' << format_double(c.ZJ) << ','
                      << format_double(c.Ztheta) << ',' << format_double(c.ZG) << ','
                      << opt_str(c.q_vanish) << ',' << opt_str(c.Q_vanish) << "\n";
                } else {
                    f << ",,,,,,,,,\n";
                }
                if (c.exit_code != kExitOk) {
                    std::cerr << axis << " = " << format_double(values[i]) << " failed ("
                              << c.exit_code << "): " << c.error << "\n";
                }
            }
            std::cout << "sweep done: " << root << "/sweep.csv\n";
            return kExitOk;
        }

        if (app.got_subcommand(cmd_verify)) {
            SuiteReport rep;
            if (suite == "lemma-iteration") {
                rep = suite_lemma_iteration(seed, count > 0 ? count : 200);
            } else if (suite == "lemma-interp") {
                rep = suite_lemma_interp(seed, count > 0 ? count : 1000);
            } else if (suite == "lemma-gn") {
                rep = suite_lemma_gn(seed, count > 0 ? count : 200);
            } else if (suite == "solver-units") {
                rep = suite_solver_units(seed, count);
            } else {
                std::cerr << "unknown suite '" << suite << "'\n";
                return kExitConfig;
            }
            return emit_suite(rep, out_dir);
        }

        if (app.got_subcommand(cmd_check)) {
            RunConfig cfg = load_config(config_path);
            Grid grid;
            DensityProfile prof;
            InitialData init;
            build_inputs(cfg, grid, prof, init);
            DecayConstants dec = decay_constants(prof, grid);
            AssumptionReport rep = check_assumptions(prof, init, grid, cfg.physics);
            nlohmann::json j;
            j["config_hash"] = config_hash(cfg);
            j["hard_reject"] = rep.hard_reject;
            j["failing"] = rep.failing_count();
            j["K1"] = dec.K1;
            j["K2"] = dec.K2;
            j["K1_growth"] = dec.K1_growth;
            j["K2_growth"] = dec.K2_growth;
            nlohmann::json entries = nlohmann::json::array();
            for (const auto& e : rep.entries) {
                const char* st = e.status == AssumptionStatus::Pass        ? "pass"
                                 : e.status == AssumptionStatus::Diverging ? "diverging"
                                                                           : "fail";
                entries.push_back({{"name", e.name},
                                   {"value", e.value},
                                   {"growth_ratio", e.growth_ratio},
                                   {"status", st}});
            }
            j["entries"] = entries;
            std::cout << j.dump(2) << "\n";
            return rep.hard_reject ? kExitVacuum : kExitOk;
        }

        if (app.got_subcommand(cmd_conv)) {
            RunConfig base = load_config(config_path);
            if (levels_count < 1) {
                std::cerr << "--levels must be >= 1\n";
                return kExitConfig;
            }
            std::string root = out_dir.empty() ? base.out_dir : out_dir;
            std::vector<RunConfig> cfgs;
            for (int k = 0, N = base.N; k < levels_count; ++k, N *= 2) {
                RunConfig c = base;
                c.N = N;
                c.out_dir = root + "/N_" + std::to_string(N);
                cfgs.push_back(c);
            }
            std::vector<CellOutcome> cells(cfgs.size());
            parallel_cells(workers, static_cast<int>(cfgs.size()), [&](int i) {
                cells[i] = run_cell(cfgs[i], cfgs[i].out_dir);
            });
            std::filesystem::create_directories(root);
            std::ofstream f(std::filesystem::path(root) / "convergence.csv", std::ios::binary);
            f << "N,exit,max_energy_drift,drift_ratio,max_J_residual,residual_ratio\n";
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const CellOutcome& c = cells[i];
                f << cfgs[i].N << ',' << c.exit_code << ',';
                if (c.has_result) {
                    double dr = (i > 0 && cells[i - 1].has_result && c.drift > 0.0)
                                    ? cells[i - 1].drift / c.drift
                                    : 0.0;
                    double rr = (i > 0 && cells[i - 1].has_result && c.J_residual > 0.0)
                                    ? cells[i - 1].J_residual / c.J_residual
                                    : 0.0;
                    f << format_double(c.drift) << ',' << format_double(dr) << ','
                      << format_double(c.J_residual) << ',' << format_double(rr) << "\n";
                } else {
                    f << ",,,\n";
                }
            }
            std::cout << "convergence done: " << root << "/convergence.csv\n";
            for (const auto& c : cells) {
                if (c.exit_code != kExitOk) return c.exit_code;
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverAbort& e) {
        std::cerr << "solver abort: " << e.what() << "\n";
        return kExitAbort;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}

} // namespace nslab
