#include "lrtr/solvers.hpp"

#include "lrtr/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrtr {

namespace {

enum class DataKind { equality, penalized };

// Stationarity tolerance for the penalized model, relative to max(1, ||b||).
constexpr double kStationarityTol = 1e-6;

void check_config(const SolverConfig& cfg) {
    if (cfg.max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
    if (!(cfg.tol_rel_change > 0.0) || !(cfg.tol_feas > 0.0))
        throw std::invalid_argument("solver: tolerances must be > 0");
    if (!(cfg.penalty > 0.0)) throw std::invalid_argument("solver: penalty must be > 0");
}

// ADMM on min obj(X) + data term, splitting one auxiliary matrix per mode:
//   M_n = X_(n),  objective (1/N) sum_n ||M_n||_* (plus the augmented
//   quadratic, split (1/N) per mode so the total is ||X||_F^2 / (2 alpha)).
// M-update: svt / augmented_prox at threshold 1/(N rho). X-update: average
// the refolded (M_n - Y_n) and impose the data: exact equality projection,
// or the penalized least-squares step. Scaled duals Y_n.
SolverReport run_admm(const SensingOperator& op, const Vector& b, const Objective& obj,
                      const SolverConfig& cfg, DataKind data_kind, double lambda) {
    check_config(cfg);
    if (!b.allFinite()) throw std::invalid_argument("solver: non-finite measurements");
    if (b.size() != op.num_measurements())
        throw std::invalid_argument("solver: measurement length mismatch");

    const Shape& shape = op.domain();
    const index_t n_modes = shape.order();
    const auto un_modes = static_cast<std::size_t>(n_modes);
    const double rho = cfg.penalty;
    const double tau = 1.0 / (static_cast<double>(n_modes) * rho);
    const double c = static_cast<double>(n_modes) * rho;
    const double b_scale = std::max(1.0, b.norm());
    const bool is_mask = op.kind() == OperatorKind::mask;
    const bool equality = data_kind == DataKind::equality;

    Eigen::LDLT<Matrix> gram_ldlt;  // equality: A A^T; penalized: (c/lambda) I + A A^T
    if (!is_mask) {
        Matrix gram = op.matrix() * op.matrix().transpose();
        if (!equality) gram.diagonal().array() += c / lambda;
        gram_ldlt.compute(gram);
    }

    // Start from a feasible point (equality) or the adjoint image (penalized).
    DenseTensor x(shape);
    if (equality && !is_mask)
        x.vec() = op.matrix().transpose() * gram_ldlt.solve(b);
    else
        x = adjoint(op, b);

    std::vector<Matrix> m_vars(un_modes), y_vars(un_modes), g_vars;
    if (!equality) g_vars.resize(un_modes);
    for (std::size_t n = 0; n < un_modes; ++n) {
        m_vars[n] = unfold(x, static_cast<index_t>(n));
        y_vars[n] = Matrix::Zero(m_vars[n].rows(), m_vars[n].cols());
    }

    SolverReport report;
    Vector x_prev = x.vec();
    double feas_prev = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    int iters = 0;
    bool converged = false;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        iters = it;

        for (std::size_t n = 0; n < un_modes; ++n) {
            const Matrix cn = unfold(x, static_cast<index_t>(n)) + y_vars[n];
            m_vars[n] = obj.is_augmented() ? augmented_prox(cn, tau, obj.alpha) : svt(cn, tau);
            if (!equality) g_vars[n] = rho * (cn - m_vars[n]);
        }

        Vector xbar = Vector::Zero(x.size());
        for (std::size_t n = 0; n < un_modes; ++n)
            xbar += refold(m_vars[n] - y_vars[n], static_cast<index_t>(n), shape).vec();
        xbar /= static_cast<double>(n_modes);

        if (is_mask) {
            const auto& omega = op.omega();
            x.vec() = xbar;
            if (equality) {
                for (std::size_t i = 0; i < omega.size(); ++i)
                    x.vec()[omega[i]] = b[static_cast<index_t>(i)];
            } else {
                for (std::size_t i = 0; i < omega.size(); ++i)
                    x.vec()[omega[i]] =
                        (c * xbar[omega[i]] + lambda * b[static_cast<index_t>(i)]) / (c + lambda);
            }
        } else {
            const Matrix& a = op.matrix();
            if (equality) {
                x.vec() = xbar - a.transpose() * gram_ldlt.solve(a * xbar - b);
            } else {
                // (c I + lambda A^T A)^{-1} rhs via the Woodbury identity.
                const Vector rhs = c * xbar + lambda * (a.transpose() * b);
                x.vec() = (rhs - a.transpose() * gram_ldlt.solve(a * rhs)) / c;
            }
        }

        double consensus_gap = 0.0;
        for (std::size_t n = 0; n < un_modes; ++n) {
            const Matrix gap = unfold(x, static_cast<index_t>(n)) - m_vars[n];
            consensus_gap = std::max(consensus_gap, gap.norm());
            y_vars[n] += gap;
        }
        consensus_gap /= std::max(1.0, x.vec().norm());

        const double rel_change = (x.vec() - x_prev).norm() / std::max(1.0, x_prev.norm());
        double residual;
        if (equality) {
            residual = (apply(op, x) - b).norm();
        } else {
            // Combined first-order residual: the prox subgradients g_n sum
            // against the data-term gradient, plus the splitting consensus gap.
            Vector grad = lambda * adjoint(op, apply(op, x) - b).vec();
            double consensus = 0.0;
            for (std::size_t n = 0; n < un_modes; ++n) {
                grad += refold(g_vars[n], static_cast<index_t>(n), shape).vec();
                consensus += (unfold(x, static_cast<index_t>(n)) - m_vars[n]).norm();
            }
            residual = grad.norm() + rho * consensus;
        }

        if (cfg.record_history) {
            HistoryEntry entry;
            entry.iteration = it;
            entry.objective = objective_value(x, obj);
            entry.feasibility = residual;
            if (cfg.reference_solution)
                entry.relative_error = relative_error(x, *cfg.reference_solution);
            report.history.push_back(entry);
        }

        // The splitting gap must close as well: X can be momentarily
        // stationary while the M_n still disagree with its unfoldings.
        const double residual_tol =
            (equality ? cfg.tol_feas : kStationarityTol) * b_scale;
        if (rel_change <= cfg.tol_rel_change && consensus_gap <= cfg.tol_rel_change &&
            residual <= residual_tol) {
            converged = true;
            break;
        }

        if (equality && residual > residual_tol) {
            if (std::abs(residual - feas_prev) <= 1e-12 * std::max(1.0, feas_prev))
                ++stagnant;
            else
                stagnant = 0;
            if (stagnant >= 50)
                throw std::runtime_error(
                    "solve_equality: residual stagnated above tolerance; system appears infeasible");
        }
        feas_prev = residual;
        x_prev = x.vec();
    }

    report.solution = std::move(x);
    report.iterations_used = iters;
    report.status = converged ? SolverStatus::converged : SolverStatus::max_iters;
    return report;
}

}  // namespace

SolverReport solve_completion(const DenseTensor& observed, const SensingOperator& mask,
                              const Objective& obj, const SolverConfig& cfg) {
    if (mask.kind() != OperatorKind::mask)
        throw std::invalid_argument("solve_completion: operator must be a mask");
    if (mask.omega().empty()) throw std::invalid_argument("solve_completion: empty mask");
    const Vector b = apply(mask, observed);
    if (!b.allFinite()) throw std::invalid_argument("solve_completion: non-finite observations");
    return run_admm(mask, b, obj, cfg, DataKind::equality, 0.0);
}

SolverReport solve_equality(const SensingOperator& op, const Vector& b,
                            const Objective& obj, const SolverConfig& cfg) {
    return run_admm(op, b, obj, cfg, DataKind::equality, 0.0);
}

SolverReport solve_noisy(const SensingOperator& op, const Vector& b, double lambda,
                         const Objective& obj, const SolverConfig& cfg) {
    if (!(lambda > 0.0)) throw std::invalid_argument("solve_noisy: lambda must be > 0");
    return run_admm(op, b, obj, cfg, DataKind::penalized, lambda);
}

}  // namespace lrtr
