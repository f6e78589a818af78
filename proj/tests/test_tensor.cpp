#include "lrtr/tensor.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <vector>

using namespace lrtr;

namespace {

// x_{ijk} = i + 2(j-1) + 4(k-1), 1-based: values 1..8 in canonical order.
DenseTensor counting_tensor() {
    Vector v(8);
    for (int i = 0; i < 8; ++i) v[i] = i + 1;
    return DenseTensor(Shape({2, 2, 2}), v);
}

DenseTensor random_tensor(const Shape& shape, Rng& rng) {
    return DenseTensor(shape, normal_vector(shape.num_elements(), rng));
}

}  // namespace

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(Shape({}), std::invalid_argument);
    CHECK_THROWS_AS(Shape({3, 0, 2}), std::invalid_argument);
    CHECK(Shape({2, 3, 4}).num_elements() == 24);
    CHECK(Shape({5}).order() == 1);
}

TEST_CASE("tensor construction and indexing") {
    CHECK_THROWS_AS(DenseTensor(Shape({2, 2}), Vector::Zero(5)), std::invalid_argument);

    const DenseTensor t = counting_tensor();
    const std::array<index_t, 3> idx{1, 0, 1};
    CHECK(t.at(idx) == 6.0);  // 2 + 0 + 4

    // multi-index -> linear round trip over all elements
    const Shape shape({3, 4, 2, 5});
    const DenseTensor probe(shape);
    std::vector<index_t> mi(4, 0);
    for (index_t linear = 0; linear < shape.num_elements(); ++linear) {
        CHECK(probe.linear_index(mi) == linear);
        for (std::size_t k = 0; k < 4; ++k) {
            if (++mi[k] < shape.dims()[k]) break;
            mi[k] = 0;
        }
    }
}

TEST_CASE("unfold matches the index map on the counting tensor") {
    const DenseTensor t = counting_tensor();

    const Matrix m1 = unfold(t, 0);
    const Matrix want1 = (Matrix(2, 4) << 1, 3, 5, 7, 2, 4, 6, 8).finished();
    CHECK(m1 == want1);

    const Matrix m2 = unfold(t, 1);
    const Matrix want2 = (Matrix(2, 4) << 1, 2, 5, 6, 3, 4, 7, 8).finished();
    CHECK(m2 == want2);

    SUBCASE("order-1 tensor unfolds to a single column") {
        const DenseTensor v(Shape({4}), (Vector(4) << 2, -1, 0, 5).finished());
        const Matrix m = unfold(v, 0);
        CHECK(m.rows() == 4);
        CHECK(m.cols() == 1);
        CHECK(m.col(0) == v.vec());
    }

    CHECK_THROWS_AS(unfold(t, 3), std::invalid_argument);
    CHECK_THROWS_AS(unfold(t, -1), std::invalid_argument);
}

TEST_CASE("refold inverts unfold bit-exactly on every mode") {
    Rng rng(11);
    for (const auto& dims : std::vector<std::vector<index_t>>{
             {7}, {3, 5}, {2, 2, 2}, {4, 1, 3}, {2, 3, 2, 4}}) {
        const Shape shape(dims);
        const DenseTensor t = random_tensor(shape, rng);
        for (index_t mode = 0; mode < shape.order(); ++mode) {
            const DenseTensor back = refold(unfold(t, mode), mode, shape);
            CHECK(back.vec() == t.vec());
        }
    }

    const Matrix m = (Matrix(2, 4) << 1, 3, 5, 7, 2, 4, 6, 8).finished();
    CHECK(refold(m, 0, Shape({2, 2, 2})).vec() == counting_tensor().vec());

    CHECK_THROWS_AS(refold(Matrix::Zero(2, 3), 0, Shape({2, 2, 2})), std::invalid_argument);
}

TEST_CASE("unfolding permutes the entry multiset") {
    Rng rng(12);
    const DenseTensor t = random_tensor(Shape({3, 4, 2}), rng);
    std::vector<double> original(t.vec().data(), t.vec().data() + t.size());
    std::sort(original.begin(), original.end());
    for (index_t mode = 0; mode < 3; ++mode) {
        const Matrix m = unfold(t, mode);
        std::vector<double> entries(m.data(), m.data() + m.size());
        std::sort(entries.begin(), entries.end());
        CHECK(entries == original);
        CHECK(m.norm() == doctest::Approx(t.vec().norm()).epsilon(1e-15));
    }
}

TEST_CASE("mode_n_product") {
    const DenseTensor t = counting_tensor();

    SUBCASE("identity factor is a no-op") {
        for (index_t mode = 0; mode < 3; ++mode) {
            const DenseTensor r = mode_n_product(t, Matrix::Identity(2, 2), mode);
            CHECK((r.vec() - t.vec()).norm() == doctest::Approx(0.0));
        }
    }

    SUBCASE("row-sum factor contracts mode-1 fibers") {
        const Matrix ones = Matrix::Ones(1, 2);
        const DenseTensor r = mode_n_product(t, ones, 0);
        CHECK(r.shape() == Shape({1, 2, 2}));
        const Vector want = (Vector(4) << 3, 7, 11, 15).finished();
        CHECK(r.vec() == want);
    }

    SUBCASE("same-mode products compose as matrix products") {
        Rng rng(5);
        const DenseTensor x = random_tensor(Shape({3, 4, 2}), rng);
        const Matrix u = normal_matrix(5, 3, rng);
        const Matrix v = normal_matrix(2, 5, rng);
        const DenseTensor lhs = mode_n_product(mode_n_product(x, u, 0), v, 0);
        const DenseTensor rhs = mode_n_product(x, Matrix(v * u), 0);
        CHECK(relative_error(lhs, rhs) < 1e-12);
    }

    SUBCASE("distinct-mode products commute") {
        Rng rng(6);
        for (int rep = 0; rep < 20; ++rep) {
            const DenseTensor x = random_tensor(Shape({3, 4, 2}), rng);
            const Matrix u = normal_matrix(4, 3, rng);
            const Matrix v = normal_matrix(3, 4, rng);
            const DenseTensor ab = mode_n_product(mode_n_product(x, u, 0), v, 1);
            const DenseTensor ba = mode_n_product(mode_n_product(x, v, 1), u, 0);
            CHECK(relative_error(ab, ba) < 1e-12);
        }
    }

    SUBCASE("orthonormal square factors preserve the norm") {
        Rng rng(7);
        const DenseTensor x = random_tensor(Shape({4, 3, 5}), rng);
        for (index_t mode = 0; mode < 3; ++mode) {
            Eigen::HouseholderQR<Matrix> qr(
                normal_matrix(x.shape().dim(mode), x.shape().dim(mode), rng));
            const Matrix q = Matrix(qr.householderQ());
            const DenseTensor y = mode_n_product(x, q, mode);
            CHECK(frobenius_norm(y) == doctest::Approx(frobenius_norm(x)).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(mode_n_product(t, Matrix::Identity(3, 3), 0), std::invalid_argument);
}

TEST_CASE("inner product and Frobenius norm") {
    const DenseTensor t = counting_tensor();
    const DenseTensor zero(Shape({2, 2, 2}));

    CHECK(inner(t, zero) == 0.0);
    CHECK(inner(t, t) == 204.0);  // sum of squares 1..8
    CHECK(frobenius_norm(zero) == 0.0);
    CHECK(frobenius_norm(t) == doctest::Approx(std::sqrt(204.0)).epsilon(1e-15));

    Rng rng(8);
    for (int rep = 0; rep < 50; ++rep) {
        const DenseTensor a = random_tensor(Shape({2, 3, 2}), rng);
        const DenseTensor b = random_tensor(Shape({2, 3, 2}), rng);
        CHECK(inner(a, b) == doctest::Approx(inner(b, a)).epsilon(1e-15));
        CHECK(inner(a, a) == doctest::Approx(frobenius_norm(a) * frobenius_norm(a)));
    }

    CHECK_THROWS_AS(inner(t, DenseTensor(Shape({2, 2}))), std::invalid_argument);
}

TEST_CASE("relative error") {
    const DenseTensor t = counting_tensor();
    CHECK(relative_error(t, t) == 0.0);

    DenseTensor doubled = t;
    doubled.vec() *= 2.0;
    CHECK(relative_error(doubled, t) == doctest::Approx(1.0).epsilon(1e-15));

    Rng rng(9);
    const DenseTensor e = random_tensor(t.shape(), rng);
    DenseTensor perturbed = t;
    perturbed.vec() += e.vec();
    CHECK(relative_error(perturbed, t) ==
          doctest::Approx(frobenius_norm(e) / frobenius_norm(t)).epsilon(1e-14));

    CHECK_THROWS_AS(relative_error(t, DenseTensor(t.shape())), std::invalid_argument);
}
