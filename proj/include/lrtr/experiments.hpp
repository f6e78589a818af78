#pragma once

#include "lrtr/hosvd.hpp"
#include "lrtr/solvers.hpp"

#include <string>
#include <vector>

namespace lrtr {

/// Objective request with alpha given as a multiple of a ground-truth scale:
/// the Frobenius norm of X0 or the largest mode spectral norm of X0.
struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::trace_norm;
    double alpha_multiple = 0.0;
    enum class Scale { frobenius, spectral } scale = Scale::frobenius;

    /// "trace-norm" or "augmented:<multiple>:<fro|spec>".
    std::string label() const;
    static ObjectiveSpec parse(const std::string& text);

    double resolve_alpha(const DenseTensor& x0) const;
    Objective resolve(const DenseTensor& x0) const;
};

struct ExperimentConfig {
    Shape shape;
    RankTuple ranks;
    enum class OpKind { mask, gaussian } op_kind = OpKind::mask;
    double p = 0.5;   // mask sampling fraction
    index_t m = 0;    // gaussian measurement count
    std::vector<ObjectiveSpec> objectives;
    SolverConfig solver;
    std::uint64_t seed = 0;
    int trials = 1;
};

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Flat key=value text; '#' starts a comment; the objective key repeats.
/// Throws ConfigError with the offending line number.
ExperimentConfig parse_experiment_config(const std::string& text);

/// Runs the seeded trial matrix (one derived RNG stream per trial, run
/// concurrently, emitted in trial order) and returns the long-form CSV:
///   schema,kind,objective,alpha,trial,iteration,objective_value,feasibility,relative_error
/// with per-iteration "curve" rows followed by aggregate mean/median rows of
/// the final relative errors. Byte-deterministic for a given config.
std::string run_experiment_csv(const ExperimentConfig& cfg);

/// CSV for a single completion/recovery run over several objectives:
///   schema,objective,alpha,iteration,objective_value,feasibility,relative_error
std::string solver_runs_csv(
    const std::vector<std::pair<ObjectiveSpec, SolverReport>>& runs,
    const std::vector<double>& alphas);

}  // namespace lrtr
