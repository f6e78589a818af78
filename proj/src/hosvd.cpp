#include "lrtr/hosvd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace lrtr {

bool RankTuple::dominated_by(const RankTuple& other) const {
    if (ranks.size() != other.ranks.size()) return false;
    for (std::size_t i = 0; i < ranks.size(); ++i)
        if (ranks[i] > other.ranks[i]) return false;
    return true;
}

bool RankTuple::fits(const Shape& shape) const {
    if (order() != shape.order()) return false;
    for (index_t n = 0; n < order(); ++n)
        if (rank(n) < 0 || rank(n) > shape.dim(n)) return false;
    return true;
}

HosvdFactorization hosvd(const DenseTensor& t) {
    const index_t n = t.order();
    HosvdFactorization f;
    f.factors.reserve(static_cast<std::size_t>(n));
    for (index_t mode = 0; mode < n; ++mode) {
        Eigen::BDCSVD<Matrix> dec(unfold(t, mode), Eigen::ComputeFullU);
        f.factors.push_back(dec.matrixU());
    }
    DenseTensor core = t;
    for (index_t mode = 0; mode < n; ++mode)
        core = mode_n_product(core, f.factors[static_cast<std::size_t>(mode)].transpose(), mode);
    f.core = std::move(core);

    // Mode-n singular values are the slice norms of the core.
    f.mode_singular_values.reserve(static_cast<std::size_t>(n));
    for (index_t mode = 0; mode < n; ++mode)
        f.mode_singular_values.push_back(unfold(f.core, mode).rowwise().norm());
    return f;
}

DenseTensor hosvd_reconstruct(const HosvdFactorization& f) {
    DenseTensor t = f.core;
    for (index_t mode = 0; mode < t.order(); ++mode)
        t = mode_n_product(t, f.factors[static_cast<std::size_t>(mode)], mode);
    return t;
}

RankTuple n_rank(const DenseTensor& t, double tol) {
    if (tol < 0.0) throw std::invalid_argument("n_rank: tol must be >= 0");
    std::vector<index_t> ranks;
    ranks.reserve(static_cast<std::size_t>(t.order()));
    for (index_t mode = 0; mode < t.order(); ++mode) {
        const Vector s = singular_values(unfold(t, mode));
        index_t r = 0;
        if (s.size() > 0 && s(0) > 0.0) {
            const double cutoff = tol * s(0);
            for (index_t i = 0; i < s.size(); ++i)
                if (s(i) > cutoff) ++r;
        }
        ranks.push_back(r);
    }
    return RankTuple(std::move(ranks));
}

DenseTensor truncate_hosvd(const DenseTensor& t, const RankTuple& r) {
    if (!r.fits(t.shape()))
        throw std::invalid_argument("truncate_hosvd: rank tuple does not fit shape");
    HosvdFactorization f = hosvd(t);

    const auto& dims = t.shape().dims();
    const index_t n = t.order();
    std::vector<index_t> idx(static_cast<std::size_t>(n), 0);
    for (index_t linear = 0; linear < f.core.size(); ++linear) {
        for (index_t k = 0; k < n; ++k)
            if (idx[static_cast<std::size_t>(k)] >= r.rank(k)) {
                f.core.vec()[linear] = 0.0;
                break;
            }
        for (index_t k = 0; k < n; ++k) {
            auto uk = static_cast<std::size_t>(k);
            if (++idx[uk] < dims[uk]) break;
            idx[uk] = 0;
        }
    }
    return hosvd_reconstruct(f);
}

DenseTensor random_low_rank(const Shape& shape, const RankTuple& r, Rng& rng) {
    if (r.order() != shape.order())
        throw std::invalid_argument("random_low_rank: rank order mismatch");
    for (index_t n = 0; n < shape.order(); ++n)
        if (r.rank(n) < 1 || r.rank(n) > shape.dim(n))
            throw std::invalid_argument("random_low_rank: ranks must satisfy 1 <= r_n <= I_n");

    DenseTensor core(Shape(r.ranks), normal_vector(Shape(r.ranks).num_elements(), rng));
    DenseTensor t = std::move(core);
    for (index_t mode = 0; mode < shape.order(); ++mode)
        t = mode_n_product(t, random_orthonormal(shape.dim(mode), r.rank(mode), rng), mode);
    return t;
}

}  // namespace lrtr
