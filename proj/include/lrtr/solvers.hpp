#pragma once

#include "lrtr/operators.hpp"
#include "lrtr/prox.hpp"

#include <optional>
#include <vector>

namespace lrtr {

enum class SolverStatus { converged, max_iters };

struct SolverConfig {
    int max_iters = 500;
    double tol_rel_change = 1e-8;
    double tol_feas = 1e-9;
    /// ADMM penalty rho; fixed over the run for determinism.
    double penalty = 1.0;
    bool record_history = false;
    /// When set, per-iteration relative error against this tensor is recorded.
    std::optional<DenseTensor> reference_solution;
};

struct HistoryEntry {
    int iteration;
    double objective;
    double feasibility;
    std::optional<double> relative_error;
};

struct SolverReport {
    DenseTensor solution;
    int iterations_used = 0;
    SolverStatus status = SolverStatus::max_iters;
    std::vector<HistoryEntry> history;  // one entry per iteration when recorded
};

/// min obj(X) s.t. X agrees with `observed` on the mask's Omega.
/// Entries of `observed` outside Omega are ignored. Throws on an empty mask
/// or non-finite observed entries.
SolverReport solve_completion(const DenseTensor& observed, const SensingOperator& mask,
                              const Objective& obj, const SolverConfig& cfg);

/// min obj(X) s.t. F(X) = b, for mask or dense operators. Throws
/// std::runtime_error if the residual stagnates above tolerance
/// (infeasible system).
SolverReport solve_equality(const SensingOperator& op, const Vector& b,
                            const Objective& obj, const SolverConfig& cfg);

/// min obj(X) + (lambda/2) ||F(X) - b||^2 (penalized noisy model).
/// The feasibility field of the history carries a first-order stationarity
/// residual instead of a constraint residual.
SolverReport solve_noisy(const SensingOperator& op, const Vector& b, double lambda,
                         const Objective& obj, const SolverConfig& cfg);

}  // namespace lrtr
