// Command-line runner for the AVF / AVF-LEX / AVF-SLEX convergence
// experiments on circular orbits.
//
//   avf run      --scenario fig1 --out results/
//   avf converge --scenario fig2
//   avf step     --scenario fig1 --scheme slex --step-size 0.2
//
// Exit codes: 0 full success, 1 configuration error, 2 partial cell failures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "avf/experiment.hpp"

namespace {

struct CommonOptions {
    std::string scenario;
    std::string config_path;
    std::string out_dir;
    int workers = 0;
    std::string norm;
    double solver_tol = 0.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--scenario", opt.scenario, "Scenario preset: fig1 (Kepler) or fig2 (anharmonic)");
    cmd->add_option("--config", opt.config_path, "Config file (flat key = value, dotted sections)");
    cmd->add_option("--out", opt.out_dir, "Output directory for results.csv / summary.json / plot.gp");
    cmd->add_option("--workers", opt.workers, "Concurrent (scheme, h) cells [default: 1]");
    cmd->add_option("--norm", opt.norm, "Error norm: phase | position [default: phase]");
    cmd->add_option("--solver-tol", opt.solver_tol, "Implicit-solver tolerance [default: 1e-14]");
    cmd->add_option("--seed", opt.seed, "Seed for randomized test helpers (never experiment physics)")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
}

avf::ExperimentConfig build_config(const CommonOptions& opt) {
    std::string text;
    if (!opt.config_path.empty()) {
        std::ifstream f(opt.config_path);
        if (!f) throw avf::IoError("cannot read config file '" + opt.config_path + "'", opt.config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    if (!opt.scenario.empty()) text = "scenario = " + opt.scenario + "\n" + text;
    if (text.empty())
        throw avf::ValidationError("no configuration: pass --scenario or --config", "scenario");

    avf::ExperimentConfig cfg = avf::parse_config(text);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.workers > 0) cfg.workers = opt.workers;
    if (!opt.norm.empty()) {
        if (opt.norm == "phase")
            cfg.norm = avf::ErrorNorm::Phase;
        else if (opt.norm == "position")
            cfg.norm = avf::ErrorNorm::Position;
        else
            throw avf::ValidationError("--norm must be 'phase' or 'position'", "output.norm");
    }
    if (opt.solver_tol > 0.0) {
        if (opt.solver_tol < 1e-16 || opt.solver_tol > 1e-6)
            throw avf::ValidationError("--solver-tol must lie in [1e-16, 1e-6]", "solver.tol");
        cfg.solver_tol = opt.solver_tol;
    }
    if (opt.seed_set) cfg.seed = opt.seed;
    return cfg;
}

void print_report(const avf::ExperimentConfig& cfg, const avf::ExperimentResult& result) {
    std::printf("scenario %s: error at t = %g vs scaled step (AVF baseline costs)\n",
                avf::scenario_name(cfg.scenario), cfg.t_end);
    for (const avf::RunRecord& rec : result.records) {
        if (rec.failed) {
            std::printf("  %-4s h=%-12.6g FAILED: %s\n", avf::scheme_name(rec.scheme), rec.h,
                        rec.failure.c_str());
            continue;
        }
        std::printf("  %-4s h=%-12.6g h~=%-12.6g error=%-12.6g drift=%-10.3g (%.3fs)\n",
                    avf::scheme_name(rec.scheme), rec.h, rec.h_scaled, rec.error,
                    rec.energy_drift, rec.wall_seconds);
    }
    for (const avf::SchemeFit& fit : result.fits) {
        if (fit.failed)
            std::printf("  %-4s slope: unavailable (%s)\n", avf::scheme_name(fit.scheme),
                        fit.failure.c_str());
        else
            std::printf("  %-4s slope %.3f (lsq residual %.2e)\n", avf::scheme_name(fit.scheme),
                        fit.fit.slope, fit.fit.residual);
    }
}

int run_command(const CommonOptions& opt, bool write_outputs) {
    const avf::ExperimentConfig cfg = build_config(opt);
    const avf::ExperimentResult result = avf::run_experiment(cfg);
    print_report(cfg, result);
    if (write_outputs) {
        avf::emit_outputs(cfg, result, cfg.out_dir);
        std::printf("wrote %s/results.csv, summary.json, plot.gp\n", cfg.out_dir.c_str());
    }
    return result.any_failure() ? 2 : 0;
}

int step_command(const CommonOptions& opt, const std::string& scheme_name_arg, double h) {
    avf::ExperimentConfig cfg = build_config(opt);
    avf::Scheme scheme = avf::Scheme::AVF;
    if (scheme_name_arg == "avf")
        scheme = avf::Scheme::AVF;
    else if (scheme_name_arg == "lex")
        scheme = avf::Scheme::LEX;
    else if (scheme_name_arg == "slex")
        scheme = avf::Scheme::SLEX;
    else
        throw avf::ValidationError("--scheme must be avf, lex or slex", "run.schemes");
    if (!(h > 0.0)) h = cfg.h_ladder.front();

    const avf::CircularOrbitSpec orbit = cfg.make_orbit();
    const auto [y0, period] = avf::circular_orbit_state(orbit);
    const avf::HamiltonianSystem sys{orbit.potential};
    const avf::SchemeConfig scfg = cfg.make_scheme_config(scheme, h);
    avf::StepCounters counters;
    const avf::PhaseState y1 = avf::scheme_step(sys, scfg, y0, h, counters);

    nlohmann::ordered_json j;
    j["scheme"] = avf::scheme_name(scheme);
    j["h"] = h;
    j["orbit_period"] = period;
    j["y0"] = nlohmann::ordered_json{{"x", y0.x}, {"p", y0.p}};
    j["y1"] = nlohmann::ordered_json{{"x", y1.x}, {"p", y1.p}};
    j["energy_before"] = avf::energy(sys, y0);
    j["energy_after"] = avf::energy(sys, y1);
    j["energy_drift"] = std::abs(avf::energy(sys, y1) - avf::energy(sys, y0));
    j["counters"] = nlohmann::ordered_json{{"gradient_evals", counters.gradient_evals},
                                           {"hessian_evals", counters.hessian_evals},
                                           {"matrix_function_builds", counters.matrix_function_builds},
                                           {"modifier_applications", counters.modifier_applications},
                                           {"solver_iterations", counters.solver_iterations}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-preserving AVF, AVF-LEX and AVF-SLEX integrators: convergence and "
                 "cost-matched accuracy experiments on circular orbits"};
    app.require_subcommand(1);
    app.footer(R"(Config file keys (flat key = value, '#' comments; defaults in brackets):
  scenario                fig1 | fig2 | custom            [custom]
  potential.kind          kepler | anharmonic | radial_power
  potential.kappa         Kepler coupling > 0             [1.0]
  potential.alpha/.beta   anharmonic coefficients
  potential.coefficient   radial power prefactor
  potential.exponent      radial power exponent           [2.0]
  potential.dim           spatial dimension >= 2          [3]
  orbit.radius            circular orbit radius > 0
  run.t_end               error measurement time          [100]
  run.schemes             comma list of avf,lex,slex      [avf,lex,slex]
  run.form                separable | general             [separable]
  run.workers             concurrent cells >= 1           [1]
  run.seed                randomized-helper seed          [0]
  ladder.h                comma list, strictly decreasing (preset for fig1/fig2)
  solver.tol              in [1e-16, 1e-6]                [1e-14]
  solver.max_iter         in [1, 500]                     [200]
  dgrad.strategy          closed | gauss                  [closed]
  dgrad.nodes             2..16, 24, 32, 48, 64           [8]
  cost.gradient           weight per gradient expression  [1.0]
  cost.hessian            weight per Hessian evaluation   [0.75]
  cost.matrix_build       weight per modifier build       [0.65]
  cost.modifier_apply     weight per modifier application [0.3]
  output.norm             phase | position                [phase]
  output.dir              output directory                [out]

Scenario presets: fig1 = Kepler kappa=1, R=3.5, ladder T/400..T/3200;
fig2 = anharmonic alpha=0.5 beta=0.01, R=3.5, ladder T/50..T/400; both
measure the phase-space error against the exact circular orbit at t = 100.)");

    CommonOptions run_opt, conv_opt, step_opt;
    std::string step_scheme = "avf";
    double step_h = 0.0;

    CLI::App* run = app.add_subcommand("run", "Run the experiment and write CSV/JSON/gnuplot outputs");
    add_common(run, run_opt);

    CLI::App* conv = app.add_subcommand("converge", "Run the experiment and print the slope table");
    add_common(conv, conv_opt);

    CLI::App* step = app.add_subcommand("step", "Single-step debug dump as JSON");
    add_common(step, step_opt);
    step->add_option("--scheme", step_scheme, "Scheme for the step: avf | lex | slex");
    step->add_option("--step-size", step_h, "Step size [default: largest ladder entry]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(run_opt, true);
        if (conv->parsed()) return run_command(conv_opt, !conv_opt.out_dir.empty());
        if (step->parsed()) return step_command(step_opt, step_scheme, step_h);
    } catch (const avf::ParseError& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return 1;
    } catch (const avf::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const avf::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 1;
    } catch (const avf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
