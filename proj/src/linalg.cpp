#include "lrtr/linalg.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>

namespace lrtr {

namespace {

void check_finite(const Matrix& a, const char* who) {
    if (!a.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

}  // namespace

SvdResult svd(const Matrix& a) {
    check_finite(a, "svd");
    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Vector singular_values(const Matrix& a) {
    check_finite(a, "singular_values");
    Eigen::BDCSVD<Matrix> dec(a);
    return dec.singularValues();
}

double spectral_norm(const Matrix& a) { return singular_values(a)(0); }

double nuclear_norm(const Matrix& a) { return singular_values(a).sum(); }

double default_rank_tol(index_t rows, index_t cols) {
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon();
}

Matrix random_orthonormal(index_t rows, index_t cols, Rng& rng) {
    if (cols > rows)
        throw std::invalid_argument("random_orthonormal: cols > rows");
    const Matrix g = normal_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    // Fix the sign ambiguity so the ensemble is exactly Haar.
    const Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (index_t j = 0; j < cols; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

Matrix null_space_basis(const Matrix& a, double rel_tol) {
    check_finite(a, "null_space_basis");
    if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
    if (rel_tol < 0.0) rel_tol = default_rank_tol(a.rows(), a.cols());

    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeFullV);
    const Vector& s = dec.singularValues();
    const double cutoff = s.size() > 0 ? rel_tol * s(0) : 0.0;
    index_t rank = 0;
    for (index_t i = 0; i < s.size(); ++i)
        if (s(i) > cutoff) ++rank;
    return dec.matrixV().rightCols(a.cols() - rank);
}

}  // namespace lrtr
