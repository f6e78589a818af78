#pragma once

#include "lrtr/tensor.hpp"

#include <vector>

namespace lrtr {

enum class OperatorKind { mask, dense };

/// Linear map from tensors to measurement vectors: either entry sampling
/// on an index set Omega (completion) or a dense matrix acting on vec(X).
/// Immutable after construction.
class SensingOperator {
public:
    /// omega holds linear indices in canonical element order; stored sorted,
    /// duplicates rejected. May be empty (useful for certificates, not for
    /// solving).
    static SensingOperator mask(Shape shape, std::vector<index_t> omega);
    static SensingOperator dense(Shape shape, Matrix a);

    OperatorKind kind() const { return kind_; }
    const Shape& domain() const { return shape_; }
    index_t num_measurements() const;

    const std::vector<index_t>& omega() const;
    const Matrix& matrix() const;

private:
    SensingOperator() = default;
    OperatorKind kind_ = OperatorKind::mask;
    Shape shape_;
    std::vector<index_t> omega_;
    Matrix a_;
};

/// F(t): sampled entries in Omega order, or A * vec(t).
Vector apply(const SensingOperator& op, const DenseTensor& t);

/// F^T(y), satisfying <F(t), y> = <t, adjoint(F, y)> for all t, y.
DenseTensor adjoint(const SensingOperator& op, const Vector& y);

/// Dense m x prod(I) materialization acting on vec(X). Guarded: throws if
/// the domain has more than 2^16 elements.
Matrix to_matrix(const SensingOperator& op);

/// Dense operator with i.i.d. N(0, 1/m) entries, so E||F(t)||^2 = ||t||_F^2.
SensingOperator gaussian_operator(const Shape& shape, index_t m, Rng& rng);

/// Mask with |Omega| = round(p * prod(I)) indices sampled uniformly without
/// replacement, 0 < p <= 1.
SensingOperator random_mask(const Shape& shape, double p, Rng& rng);

}  // namespace lrtr
