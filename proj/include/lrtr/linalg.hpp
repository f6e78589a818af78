#pragma once

#include "lrtr/rng.hpp"

namespace lrtr {

/// Thin SVD a = u * diag(s) * v^T with s descending and nonnegative,
/// u and v having orthonormal columns.
struct SvdResult {
    Matrix u;
    Vector s;
    Matrix v;
};

/// Thin SVD. Throws std::invalid_argument on non-finite input.
SvdResult svd(const Matrix& a);

/// Singular values only (descending), length min(rows, cols).
Vector singular_values(const Matrix& a);

/// Largest singular value.
double spectral_norm(const Matrix& a);

/// Sum of singular values.
double nuclear_norm(const Matrix& a);

/// Default relative tolerance for numerical rank decisions:
/// max(rows, cols) * machine epsilon (applied to sigma_1).
double default_rank_tol(index_t rows, index_t cols);

/// Matrix with orthonormal columns, cols <= rows, drawn from the
/// rotation-invariant ensemble (QR of a Gaussian matrix, R-diagonal
/// sign-fixed). Deterministic for a given rng state.
Matrix random_orthonormal(index_t rows, index_t cols, Rng& rng);

/// Orthonormal basis of the numerical null space of a: the right singular
/// vectors with sigma_i <= rel_tol * sigma_1. Column count equals
/// cols - rank(a) at that tolerance; may have zero columns.
/// rel_tol < 0 selects default_rank_tol(rows, cols).
Matrix null_space_basis(const Matrix& a, double rel_tol = -1.0);

}  // namespace lrtr
