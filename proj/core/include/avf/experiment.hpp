#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avf/analysis.hpp"

namespace avf {

enum class Scenario { Fig1, Fig2, Custom };

const char* scenario_name(Scenario s);

/// Full experiment description: scenario preset or custom potential, step
/// ladder, schemes, solver settings, cost weights, and output options.
struct ExperimentConfig {
    Scenario scenario = Scenario::Custom;

    PotentialKind kind = PotentialKind::Kepler;
    double kappa = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double coefficient = 0.0;
    double exponent = 2.0;
    int dim = 3;

    double radius = 0.0;
    double t_end = 100.0;
    std::vector<Scheme> schemes = {Scheme::AVF, Scheme::LEX, Scheme::SLEX};
    std::vector<double> h_ladder;
    SchemeForm form = SchemeForm::Separable;

    double solver_tol = 1e-14;
    int solver_max_iter = 200;

    bool closed_gradient = true;  // exact strategy when the kind has one
    int gl_nodes = 8;

    CostWeights weights;
    ErrorNorm norm = ErrorNorm::Phase;
    std::string out_dir = "out";
    int workers = 1;
    std::uint64_t seed = 0;

    [[nodiscard]] PotentialModel make_potential() const;
    [[nodiscard]] DiscreteGradientSpec make_dgrad() const;
    [[nodiscard]] CircularOrbitSpec make_orbit() const;
    [[nodiscard]] SchemeConfig make_scheme_config(Scheme scheme, double h) const;

    /// Preset with the default ladder for the two benchmark experiments.
    static ExperimentConfig preset(Scenario scenario);
};

/// Parses the flat key-value config document (dotted section prefixes,
/// '#' comments).  Unknown keys and invalid values raise ValidationError
/// naming the key; malformed lines raise ParseError with line/column.
/// A scenario key applies its preset first; later keys override it.
ExperimentConfig parse_config(const std::string& text);

/// Outcome of one (scheme, h) cell.
struct RunRecord {
    Scheme scheme = Scheme::AVF;
    double h = 0.0;
    double h_scaled = 0.0;
    double error = 0.0;
    double energy_drift = 0.0;
    StepCounters counters;
    double wall_seconds = 0.0;  // informational; never written to output files
    bool failed = false;
    std::string failure;
};

struct SchemeFit {
    Scheme scheme = Scheme::AVF;
    bool failed = false;
    std::string failure;
    FitResult fit;
};

struct ExperimentResult {
    std::vector<RunRecord> records;     // scheme order as configured, h descending
    std::vector<SchemeFit> fits;        // one per configured scheme
    std::vector<ConvergenceReport> reports;

    [[nodiscard]] bool any_failure() const;
};

/// Runs every (scheme, h) cell, computes scaled steps against the AVF
/// baseline at matched times, and fits per-scheme slopes.  A failing cell is
/// recorded and the run continues.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes results.csv, summary.json and plot.gp into out_dir.  Output is
/// deterministic: identical config and binary give byte-identical files.
void emit_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                  const std::string& out_dir);

/// 17-significant-digit formatting used for every number in the CSV; the
/// printed form parses back to the identical double.
std::string format_g17(double v);

}  // namespace avf
