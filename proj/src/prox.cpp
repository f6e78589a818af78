#include "lrtr/prox.hpp"

#include "lrtr/linalg.hpp"

#include <stdexcept>

namespace lrtr {

Objective Objective::augmented(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("Objective: alpha must be > 0");
    return {ObjectiveKind::augmented, alpha};
}

double tensor_trace_norm(const DenseTensor& t) {
    double sum = 0.0;
    for (index_t mode = 0; mode < t.order(); ++mode)
        sum += nuclear_norm(unfold(t, mode));
    return sum / static_cast<double>(t.order());
}

double objective_value(const DenseTensor& t, const Objective& obj) {
    double value = tensor_trace_norm(t);
    if (obj.is_augmented()) value += t.vec().squaredNorm() / (2.0 * obj.alpha);
    return value;
}

Matrix svt(const Matrix& m, double tau) {
    if (tau < 0.0) throw std::invalid_argument("svt: tau must be >= 0");
    SvdResult dec = svd(m);
    Vector shrunk = (dec.s.array() - tau).max(0.0);
    return dec.u * shrunk.asDiagonal() * dec.v.transpose();
}

Matrix augmented_prox(const Matrix& m, double tau, double alpha) {
    if (!(tau > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("augmented_prox: tau and alpha must be > 0");
    return (alpha / (alpha + tau)) * svt(m, tau);
}

}  // namespace lrtr
