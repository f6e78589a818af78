#pragma once

#include "lrtr/rng.hpp"

#include <span>
#include <vector>

namespace lrtr {

/// Dimensions (I_1, ..., I_N) of an N-way tensor, every I_n >= 1.
class Shape {
public:
    Shape() = default;
    explicit Shape(std::vector<index_t> dims);

    index_t order() const { return static_cast<index_t>(dims_.size()); }
    index_t dim(index_t n) const { return dims_[static_cast<std::size_t>(n)]; }
    const std::vector<index_t>& dims() const { return dims_; }
    index_t num_elements() const;

    bool operator==(const Shape&) const = default;

private:
    std::vector<index_t> dims_;
};

/// Dense N-way tensor. Elements are stored first-index-fastest, i.e. the
/// linear position of (i_1,...,i_N) (0-based) is sum_k i_k * prod_{m<k} I_m,
/// so vec() is the column-major read of the mode-0 unfolding.
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
        data_ = Vector::Zero(shape_.num_elements());
    }
    DenseTensor(Shape shape, Vector data);

    const Shape& shape() const { return shape_; }
    index_t order() const { return shape_.order(); }
    index_t size() const { return data_.size(); }

    const Vector& vec() const { return data_; }
    Vector& vec() { return data_; }

    index_t linear_index(std::span<const index_t> idx) const;
    double at(std::span<const index_t> idx) const { return data_[linear_index(idx)]; }
    double& at(std::span<const index_t> idx) { return data_[linear_index(idx)]; }

private:
    Shape shape_;
    Vector data_;
};

/// Mode-n unfolding (n is 0-based): an I_n x (prod_{k!=n} I_k) matrix whose
/// columns are the mode-n fibers. Element (i_0,...,i_{N-1}) lands in column
/// sum_{k!=n} i_k * J_k with J_k = prod_{m<k, m!=n} I_m. Pure permutation,
/// bit-exact.
Matrix unfold(const DenseTensor& t, index_t mode);

/// Exact inverse of unfold for the given mode and shape.
DenseTensor refold(const Matrix& m, index_t mode, const Shape& shape);

/// t x_n u: contracts mode n with the rows of u (u has I_n columns);
/// the result replaces I_n by u.rows().
DenseTensor mode_n_product(const DenseTensor& t, const Matrix& u, index_t mode);

double inner(const DenseTensor& a, const DenseTensor& b);
double frobenius_norm(const DenseTensor& t);

/// ||x - x0||_F / ||x0||_F. Throws if x0 is the zero tensor.
double relative_error(const DenseTensor& x, const DenseTensor& x0);

}  // namespace lrtr
