#pragma once

#include "lrtr/linalg.hpp"
#include "lrtr/tensor.hpp"

namespace lrtr {

/// Multilinear rank tuple (r_1, ..., r_N).
struct RankTuple {
    std::vector<index_t> ranks;

    RankTuple() = default;
    explicit RankTuple(std::vector<index_t> r) : ranks(std::move(r)) {}

    index_t order() const { return static_cast<index_t>(ranks.size()); }
    index_t rank(index_t n) const { return ranks[static_cast<std::size_t>(n)]; }

    /// Componentwise partial order.
    bool dominated_by(const RankTuple& other) const;
    bool fits(const Shape& shape) const;

    bool operator==(const RankTuple&) const = default;
};

/// Higher-order SVD: input = core x_1 U^(1) ... x_N U^(N) with square
/// orthonormal factors and an all-orthogonal core whose mode-n slice norms
/// (the mode-n singular values, descending) match the singular values of
/// the mode-n unfolding.
struct HosvdFactorization {
    DenseTensor core;
    std::vector<Matrix> factors;
    std::vector<Vector> mode_singular_values;  // length I_n per mode
};

HosvdFactorization hosvd(const DenseTensor& t);

/// core x_1 U^(1) ... x_N U^(N).
DenseTensor hosvd_reconstruct(const HosvdFactorization& f);

/// r_n = number of mode-n singular values above tol * sigma_1^(n).
RankTuple n_rank(const DenseTensor& t, double tol = 1e-8);

/// Zeroes the core slices with index >= r_n in every mode and reconstructs;
/// the result has n_rank componentwise <= r.
DenseTensor truncate_hosvd(const DenseTensor& t, const RankTuple& r);

/// Gaussian core of shape (r_1,...,r_N) expanded by per-mode random
/// orthonormal factors; has multilinear rank exactly r almost surely.
DenseTensor random_low_rank(const Shape& shape, const RankTuple& r, Rng& rng);

}  // namespace lrtr
