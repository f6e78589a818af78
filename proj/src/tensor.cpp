#include "lrtr/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrtr {

Shape::Shape(std::vector<index_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("Shape: order must be >= 1");
    for (index_t d : dims_)
        if (d < 1) throw std::invalid_argument("Shape: every dimension must be >= 1");
}

index_t Shape::num_elements() const {
    index_t n = 1;
    for (index_t d : dims_) n *= d;
    return n;
}

DenseTensor::DenseTensor(Shape shape, Vector data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.num_elements())
        throw std::invalid_argument("DenseTensor: data length " + std::to_string(data_.size()) +
                                    " does not match shape element count " +
                                    std::to_string(shape_.num_elements()));
}

index_t DenseTensor::linear_index(std::span<const index_t> idx) const {
    const auto& dims = shape_.dims();
    if (idx.size() != dims.size())
        throw std::invalid_argument("DenseTensor: index order mismatch");
    index_t linear = 0;
    index_t stride = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= dims[k])
            throw std::out_of_range("DenseTensor: index out of range");
        linear += idx[k] * stride;
        stride *= dims[k];
    }
    return linear;
}

namespace {

void check_mode(const Shape& shape, index_t mode) {
    if (mode < 0 || mode >= shape.order())
        throw std::invalid_argument("mode " + std::to_string(mode) +
                                    " out of range for order " + std::to_string(shape.order()));
}

// J_k = prod_{m<k, m!=mode} I_m for k != mode (0 at k == mode, unused).
std::vector<index_t> column_strides(const Shape& shape, index_t mode) {
    const auto& dims = shape.dims();
    std::vector<index_t> strides(dims.size(), 0);
    index_t running = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<index_t>(k) == mode) continue;
        strides[k] = running;
        running *= dims[k];
    }
    return strides;
}

}  // namespace

Matrix unfold(const DenseTensor& t, index_t mode) {
    check_mode(t.shape(), mode);
    const auto& dims = t.shape().dims();
    const index_t n = t.shape().order();
    const index_t rows = dims[static_cast<std::size_t>(mode)];
    const index_t cols = t.size() / rows;

    Matrix out(rows, cols);
    const auto strides = column_strides(t.shape(), mode);
    std::vector<index_t> idx(static_cast<std::size_t>(n), 0);
    index_t col = 0;
    for (index_t linear = 0; linear < t.size(); ++linear) {
        out(idx[static_cast<std::size_t>(mode)], col) = t.vec()[linear];
        for (index_t k = 0; k < n; ++k) {
            auto uk = static_cast<std::size_t>(k);
            if (k != mode) col += strides[uk];
            if (++idx[uk] < dims[uk]) break;
            idx[uk] = 0;
            if (k != mode) col -= strides[uk] * dims[uk];
        }
    }
    return out;
}

DenseTensor refold(const Matrix& m, index_t mode, const Shape& shape) {
    check_mode(shape, mode);
    const auto& dims = shape.dims();
    const index_t n = shape.order();
    const index_t rows = dims[static_cast<std::size_t>(mode)];
    const index_t cols = shape.num_elements() / rows;
    if (m.rows() != rows || m.cols() != cols)
        throw std::invalid_argument("refold: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected " +
                                    std::to_string(rows) + "x" + std::to_string(cols));

    DenseTensor t(shape);
    const auto strides = column_strides(shape, mode);
    std::vector<index_t> idx(static_cast<std::size_t>(n), 0);
    index_t col = 0;
    for (index_t linear = 0; linear < t.size(); ++linear) {
        t.vec()[linear] = m(idx[static_cast<std::size_t>(mode)], col);
        for (index_t k = 0; k < n; ++k) {
            auto uk = static_cast<std::size_t>(k);
            if (k != mode) col += strides[uk];
            if (++idx[uk] < dims[uk]) break;
            idx[uk] = 0;
            if (k != mode) col -= strides[uk] * dims[uk];
        }
    }
    return t;
}

DenseTensor mode_n_product(const DenseTensor& t, const Matrix& u, index_t mode) {
    check_mode(t.shape(), mode);
    if (u.cols() != t.shape().dim(mode))
        throw std::invalid_argument("mode_n_product: factor has " + std::to_string(u.cols()) +
                                    " columns, mode dimension is " +
                                    std::to_string(t.shape().dim(mode)));
    std::vector<index_t> dims = t.shape().dims();
    dims[static_cast<std::size_t>(mode)] = u.rows();
    const Shape out_shape(std::move(dims));
    return refold(u * unfold(t, mode), mode, out_shape);
}

double inner(const DenseTensor& a, const DenseTensor& b) {
    if (!(a.shape() == b.shape())) throw std::invalid_argument("inner: shape mismatch");
    return a.vec().dot(b.vec());
}

double frobenius_norm(const DenseTensor& t) { return t.vec().norm(); }

double relative_error(const DenseTensor& x, const DenseTensor& x0) {
    if (!(x.shape() == x0.shape())) throw std::invalid_argument("relative_error: shape mismatch");
    const double denom = frobenius_norm(x0);
    if (denom == 0.0) throw std::invalid_argument("relative_error: reference tensor is zero");
    return (x.vec() - x0.vec()).norm() / denom;
}

}  // namespace lrtr
