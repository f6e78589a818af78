#include "lrtr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lrtr {

namespace {
constexpr index_t kMaxDenseColumns = index_t{1} << 16;
}

SensingOperator SensingOperator::mask(Shape shape, std::vector<index_t> omega) {
    const index_t total = shape.num_elements();
    std::sort(omega.begin(), omega.end());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (omega[i] < 0 || omega[i] >= total)
            throw std::invalid_argument("SensingOperator: mask index out of range");
        if (i > 0 && omega[i] == omega[i - 1])
            throw std::invalid_argument("SensingOperator: duplicate mask index");
    }
    SensingOperator op;
    op.kind_ = OperatorKind::mask;
    op.shape_ = std::move(shape);
    op.omega_ = std::move(omega);
    return op;
}

SensingOperator SensingOperator::dense(Shape shape, Matrix a) {
    if (a.cols() != shape.num_elements())
        throw std::invalid_argument("SensingOperator: matrix column count must equal element count");
    if (!a.allFinite())
        throw std::invalid_argument("SensingOperator: non-finite matrix entries");
    SensingOperator op;
    op.kind_ = OperatorKind::dense;
    op.shape_ = std::move(shape);
    op.a_ = std::move(a);
    return op;
}

index_t SensingOperator::num_measurements() const {
    return kind_ == OperatorKind::mask ? static_cast<index_t>(omega_.size()) : a_.rows();
}

const std::vector<index_t>& SensingOperator::omega() const {
    if (kind_ != OperatorKind::mask)
        throw std::logic_error("SensingOperator: omega() on a dense operator");
    return omega_;
}

const Matrix& SensingOperator::matrix() const {
    if (kind_ != OperatorKind::dense)
        throw std::logic_error("SensingOperator: matrix() on a mask operator");
    return a_;
}

Vector apply(const SensingOperator& op, const DenseTensor& t) {
    if (!(t.shape() == op.domain())) throw std::invalid_argument("apply: shape mismatch");
    if (op.kind() == OperatorKind::mask) {
        const auto& omega = op.omega();
        Vector y(static_cast<index_t>(omega.size()));
        for (std::size_t i = 0; i < omega.size(); ++i) y[static_cast<index_t>(i)] = t.vec()[omega[i]];
        return y;
    }
    return op.matrix() * t.vec();
}

DenseTensor adjoint(const SensingOperator& op, const Vector& y) {
    if (y.size() != op.num_measurements())
        throw std::invalid_argument("adjoint: measurement length mismatch");
    DenseTensor t(op.domain());
    if (op.kind() == OperatorKind::mask) {
        const auto& omega = op.omega();
        for (std::size_t i = 0; i < omega.size(); ++i) t.vec()[omega[i]] = y[static_cast<index_t>(i)];
    } else {
        t.vec() = op.matrix().transpose() * y;
    }
    return t;
}

Matrix to_matrix(const SensingOperator& op) {
    const index_t total = op.domain().num_elements();
    if (total > kMaxDenseColumns)
        throw std::invalid_argument("to_matrix: domain too large to materialize");
    if (op.kind() == OperatorKind::dense) return op.matrix();
    const auto& omega = op.omega();
    Matrix a = Matrix::Zero(static_cast<index_t>(omega.size()), total);
    for (std::size_t i = 0; i < omega.size(); ++i) a(static_cast<index_t>(i), omega[i]) = 1.0;
    return a;
}

SensingOperator gaussian_operator(const Shape& shape, index_t m, Rng& rng) {
    if (m < 1) throw std::invalid_argument("gaussian_operator: m must be >= 1");
    Matrix a = normal_matrix(m, shape.num_elements(), rng);
    a /= std::sqrt(static_cast<double>(m));
    return SensingOperator::dense(shape, std::move(a));
}

SensingOperator random_mask(const Shape& shape, double p, Rng& rng) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("random_mask: p must be in (0, 1]");
    const index_t total = shape.num_elements();
    const auto count = static_cast<index_t>(std::llround(p * static_cast<double>(total)));

    // Partial Fisher-Yates over the index pool.
    std::vector<index_t> pool(static_cast<std::size_t>(total));
    std::iota(pool.begin(), pool.end(), index_t{0});
    for (index_t i = 0; i < count; ++i) {
        const index_t j = i + rng.uniform_below(total - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return SensingOperator::mask(shape, std::move(pool));
}

}  // namespace lrtr
