#pragma once

#include "lrtr/tensor.hpp"

namespace lrtr {

enum class ObjectiveKind { trace_norm, augmented };

/// Recovery objective: the tensor trace norm, or the trace norm plus
/// ||X||_F^2 / (2 alpha). The plain model is its alpha -> infinity limit
/// but is represented explicitly rather than by a sentinel alpha.
struct Objective {
    ObjectiveKind kind = ObjectiveKind::trace_norm;
    double alpha = 0.0;

    static Objective trace_norm() { return {ObjectiveKind::trace_norm, 0.0}; }
    static Objective augmented(double alpha);

    bool is_augmented() const { return kind == ObjectiveKind::augmented; }
};

/// (1/N) * sum over modes of the nuclear norm of the mode-n unfolding.
double tensor_trace_norm(const DenseTensor& t);

/// tensor_trace_norm(t), plus ||t||_F^2 / (2 alpha) for the augmented kind.
double objective_value(const DenseTensor& t, const Objective& obj);

/// Singular value thresholding, the prox of tau * nuclear norm:
/// U diag(max(s_i - tau, 0)) V^T.
Matrix svt(const Matrix& m, double tau);

/// Minimizer of ||X||_* + ||X||_F^2/(2 alpha) + ||X - m||_F^2/(2 tau),
/// i.e. (alpha / (alpha + tau)) * svt(m, tau). The shrink-then-scale form
/// is cross-checked against a numeric minimizer in the test suite.
Matrix augmented_prox(const Matrix& m, double tau, double alpha);

}  // namespace lrtr
