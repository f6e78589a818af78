#include "lrtr/guarantees.hpp"

#include "lrtr/linalg.hpp"
#include "lrtr/prox.hpp"
#include "lrtr/solvers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lrtr;

namespace {

// Independent margin evaluation for witness audits (kept apart from the
// library's internal implementation).
double nsp_margin_local(const DenseTensor& h, const RankTuple& r,
                        const std::vector<double>& weights) {
    double margin = 0.0;
    for (index_t mode = 0; mode < h.order(); ++mode) {
        const Vector s =
            Eigen::JacobiSVD<Matrix>(unfold(h, mode)).singularValues();
        for (index_t j = 0; j < s.size(); ++j)
            margin += j < r.rank(mode)
                          ? -weights[static_cast<std::size_t>(mode)] * s(j)
                          : s(j);
    }
    return margin;
}

SensingOperator orthogonal_square_operator(const Shape& shape, std::uint64_t seed) {
    Rng rng(seed);
    const index_t q = shape.num_elements();
    return SensingOperator::dense(shape, random_orthonormal(q, q, rng));
}

}  // namespace

TEST_CASE("theta formula and pinned constants") {
    CHECK(theta(0.0) == doctest::Approx(0.3535533906).epsilon(1e-9));

    const double root = (77.0 - std::sqrt(1337.0)) / 82.0;
    CHECK(std::abs(theta(root) - 1.0) <= 1e-9);
    CHECK(root == doctest::Approx(0.4931).epsilon(1e-3));

    const double t = theta(0.4404);
    CHECK(1.0 / (1.0 / t - 1.0) == doctest::Approx(9.9849).epsilon(1e-3));

    SUBCASE("monotone increasing up to the plain threshold") {
        double prev = theta(0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double cur = theta(root * i / 1000.0);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
    CHECK_THROWS_AS(theta(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(theta(1.0), std::invalid_argument);
}

TEST_CASE("alpha lower bound") {
    CHECK(alpha_lower_bound(0.4404, 1.0) == doctest::Approx(9.9849).epsilon(1e-3));
    CHECK(alpha_lower_bound(0.0, 2.0) == doctest::Approx(2.0 * 0.5469).epsilon(1e-3));

    SUBCASE("monotone in delta, linear in the spectral norm") {
        double prev = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double delta = 0.44 * i / 100.0;
            const double v = alpha_lower_bound(delta, 1.0);
            CHECK(v >= prev);
            CHECK(alpha_lower_bound(delta, 3.5) == doctest::Approx(3.5 * v));
            prev = v;
        }
    }
    CHECK_THROWS_AS(alpha_lower_bound(0.4931, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_lower_bound(0.1, -1.0), std::invalid_argument);
}

TEST_CASE("rip thresholds") {
    CHECK(rip_threshold_plain() == doctest::Approx(0.49311).epsilon(1e-4));
    CHECK(rip_threshold_augmented() == 0.4404);
    CHECK(rip_threshold_plain() > rip_threshold_augmented());
}

TEST_CASE("check_nsp") {
    SUBCASE("trivial null space holds vacuously") {
        const auto op = orthogonal_square_operator(Shape({2, 2, 2}), 61);
        Rng rng(1);
        const CertificateReport rep = check_nsp(op, RankTuple({1, 1, 1}), 50, rng);
        CHECK(rep.verdict == CertificateVerdict::holds_on_samples);
        CHECK(rep.samples_used == 0);
        CHECK(!rep.witness.has_value());
    }
    SUBCASE("empty mask is violated with a low-rank witness") {
        const auto op = SensingOperator::mask(Shape({4, 4, 4}), {});
        Rng rng(3);
        const CertificateReport rep = check_nsp(op, RankTuple({1, 1, 1}), 20, rng);
        CHECK(rep.verdict == CertificateVerdict::violated);
        REQUIRE(rep.witness.has_value());
        // margin of a unit rank-(1,1,1) tensor: 0 - 3 heads
        CHECK(rep.estimate == doctest::Approx(-3.0).epsilon(1e-6));
        const std::vector<double> w(3, 1.0);
        CHECK(nsp_margin_local(*rep.witness, RankTuple({1, 1, 1}), w) <= -1e-10);
        CHECK(frobenius_norm(*rep.witness) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("well-measured Gaussian operator holds with positive margin") {
        Rng op_rng(11);
        const auto op = gaussian_operator(Shape({4, 4, 4}), 60, op_rng);
        Rng rng(5);
        const CertificateReport rep = check_nsp(op, RankTuple({1, 1, 1}), 500, rng);
        CHECK(rep.verdict == CertificateVerdict::holds_on_samples);
        CHECK(rep.estimate > 0.0);
        CHECK(rep.samples_used == 500);
    }
    SUBCASE("violated witnesses lie in the null space") {
        const auto op = SensingOperator::mask(Shape({3, 3, 3}), {0});
        Rng rng(9);
        const CertificateReport rep = check_nsp(op, RankTuple({1, 1, 1}), 10, rng);
        REQUIRE(rep.verdict == CertificateVerdict::violated);
        const Vector image = to_matrix(op) * rep.witness->vec();
        CHECK(image.norm() <= 1e-8);
    }
}

TEST_CASE("check_nsp_augmented") {
    Rng op_rng(11);
    const auto op = gaussian_operator(Shape({4, 4, 4}), 60, op_rng);
    const RankTuple r({1, 1, 1});
    const std::vector<double> norms(3, 1.0);

    SUBCASE("alpha -> infinity agrees with the plain check on identical seeds") {
        Rng a(5), b(5);
        const CertificateReport plain = check_nsp(op, r, 300, a);
        const CertificateReport aug = check_nsp_augmented(op, r, 1e12, norms, 300, b);
        CHECK(plain.verdict == aug.verdict);
        CHECK(std::abs(plain.estimate - aug.estimate) <= 1e-6);
    }
    SUBCASE("finite alpha tightens the margin") {
        Rng a(5), b(5);
        const CertificateReport plain = check_nsp(op, r, 200, a);
        const CertificateReport aug = check_nsp_augmented(op, r, 2.0, norms, 200, b);
        CHECK(aug.estimate <= plain.estimate + 1e-12);
    }
    SUBCASE("a plain violation implies an augmented violation") {
        const auto empty = SensingOperator::mask(Shape({4, 4, 4}), {});
        Rng a(3), b(3);
        const CertificateReport plain = check_nsp(empty, r, 20, a);
        const CertificateReport aug = check_nsp_augmented(empty, r, 10.0, norms, 20, b);
        REQUIRE(plain.verdict == CertificateVerdict::violated);
        CHECK(aug.verdict == CertificateVerdict::violated);
        // the stronger inequality is violated by the plain witness too
        std::vector<double> w(3);
        for (std::size_t i = 0; i < 3; ++i) w[i] = 1.0 + norms[i] / 10.0;
        CHECK(nsp_margin_local(*plain.witness, r, w) <= -1e-10);
    }
    SUBCASE("input validation") {
        Rng rng(1);
        CHECK_THROWS_AS(check_nsp_augmented(op, r, 0.0, norms, 10, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(check_nsp_augmented(op, r, 1.0, {1.0}, 10, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("estimate_rip") {
    SUBCASE("exact isometry has zero distortion at every rank") {
        const auto op = orthogonal_square_operator(Shape({3, 3, 3}), 62);
        Rng rng(7);
        for (const auto& r : {RankTuple({1, 1, 1}), RankTuple({2, 2, 2}),
                              RankTuple({3, 3, 3})}) {
            const CertificateReport rep = estimate_rip(op, r, 20, 10, rng);
            CHECK(rep.estimate <= 1e-10);
        }
    }
    SUBCASE("zero operator has distortion exactly one") {
        const auto op = SensingOperator::dense(Shape({2, 2, 2}), Matrix::Zero(4, 8));
        Rng rng(8);
        const CertificateReport rep = estimate_rip(op, RankTuple({1, 1, 1}), 5, 5, rng);
        CHECK(rep.estimate == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("estimates are monotone along rank chains on identical seeds") {
        Rng op_rng(63);
        const auto op = gaussian_operator(Shape({4, 4, 4}), 20, op_rng);
        double prev = -1.0;
        for (const auto& r : {RankTuple({1, 1, 1}), RankTuple({2, 1, 1}),
                              RankTuple({2, 2, 1}), RankTuple({2, 2, 2})}) {
            Rng rng(17);
            const CertificateReport rep = estimate_rip(op, r, 30, 15, rng);
            CHECK(rep.estimate >= prev);
            prev = rep.estimate;
        }
    }
    SUBCASE("refined estimate matches a brute-force search at the smallest scale") {
        Rng op_rng(42);
        const auto op = gaussian_operator(Shape({2, 2, 2}), 6, op_rng);
        Rng est_rng(7), brute_rng(123);
        const CertificateReport rep = estimate_rip(op, RankTuple({1, 1, 1}), 200, 50, est_rng);
        const double brute =
            oracles::brute_force_rip_2x2x2(to_matrix(op), 100000, brute_rng);
        CHECK(std::abs(rep.estimate - brute) <= 0.05 * brute);
    }
    SUBCASE("rank validation") {
        const auto op = SensingOperator::dense(Shape({2, 2}), Matrix::Zero(1, 4));
        Rng rng(1);
        CHECK_THROWS_AS(estimate_rip(op, RankTuple({0, 1}), 5, 5, rng),
                        std::invalid_argument);
        CHECK_THROWS_AS(estimate_rip(op, RankTuple({3, 1}), 5, 5, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("estimate_ssp") {
    SUBCASE("trivial null space is inconclusive") {
        const auto op = orthogonal_square_operator(Shape({2, 2, 2}), 64);
        Rng rng(1);
        const CertificateReport rep = estimate_ssp(op, 10, 5, rng);
        CHECK(rep.verdict == CertificateVerdict::inconclusive);
        CHECK(rep.samples_used == 0);
    }
    SUBCASE("the ratio never drops below one") {
        Rng op_rng(65);
        const auto op = gaussian_operator(Shape({4, 4, 4}), 40, op_rng);
        Rng rng(2);
        const CertificateReport rep = estimate_ssp(op, 200, 30, rng);
        CHECK(rep.estimate >= 1.0 - 1e-9);
        REQUIRE(rep.ssp_delta_hat.has_value());
        CHECK(*rep.ssp_delta_hat ==
              doctest::Approx(40.0 / (rep.estimate * rep.estimate)));
    }
    SUBCASE("Delta-hat is stable across seeds") {
        Rng op_rng(65);
        const auto op = gaussian_operator(Shape({4, 4, 4}), 40, op_rng);
        double lo = 1e300, hi = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Rng rng(seed);
            const CertificateReport rep = estimate_ssp(op, 400, 30, rng);
            lo = std::min(lo, *rep.ssp_delta_hat);
            hi = std::max(hi, *rep.ssp_delta_hat);
        }
        CHECK((hi - lo) / lo <= 0.10);
    }
}

TEST_CASE("check_ssp_sufficient") {
    const RankTuple r({1, 1, 1});
    SUBCASE("large alpha reduces to m >= 4 r Delta") {
        const std::vector<double> norms(3, 1.0);
        const auto at = [&](index_t m) {
            return check_ssp_sufficient(m, 1.0, r, 1e15, norms);
        };
        CHECK(at(4) == std::vector<bool>{true, true, true});
        CHECK(at(3) == std::vector<bool>{false, false, false});
    }
    SUBCASE("worked example: threshold (2.1)^2 = 4.41") {
        const double s = 3.7;
        const std::vector<double> norms(3, s);
        const auto verdicts = check_ssp_sufficient(5, 1.0, r, 10.0 * s, norms);
        CHECK(verdicts == std::vector<bool>{true, true, true});
        const auto tight = check_ssp_sufficient(4, 1.0, r, 10.0 * s, norms);
        CHECK(tight == std::vector<bool>{false, false, false});
    }
    SUBCASE("doubling the rank doubles the required m") {
        const std::vector<double> norms(3, 1.0);
        const RankTuple r2({2, 2, 2});
        CHECK(check_ssp_sufficient(8, 1.0, r2, 1e15, norms) ==
              std::vector<bool>{true, true, true});
        CHECK(check_ssp_sufficient(7, 1.0, r2, 1e15, norms) ==
              std::vector<bool>{false, false, false});
    }
    CHECK_THROWS_AS(check_ssp_sufficient(0, 1.0, r, 1.0, {1, 1, 1}),
                    std::invalid_argument);
}

TEST_CASE("check_rip_uniqueness") {
    SUBCASE("orthogonal operator certifies uniqueness evidence") {
        const auto op = orthogonal_square_operator(Shape({4, 4, 4}), 66);
        Rng rng(3);
        const CertificateReport rep = check_rip_uniqueness(op, RankTuple({1, 1, 1}), 20, rng, 10);
        CHECK(rep.verdict == CertificateVerdict::holds_on_samples);
        CHECK(rep.estimate <= 1e-10);
    }
    SUBCASE("zero operator refutes uniqueness with a null witness") {
        const auto op = SensingOperator::dense(Shape({2, 2, 2}), Matrix::Zero(3, 8));
        Rng rng(4);
        const CertificateReport rep = check_rip_uniqueness(op, RankTuple({1, 1, 1}), 5, rng, 5);
        CHECK(rep.verdict == CertificateVerdict::violated);
        CHECK(rep.estimate == doctest::Approx(1.0));
        REQUIRE(rep.witness.has_value());
        CHECK((to_matrix(op) * rep.witness->vec()).norm() <= 1e-8);
    }
    SUBCASE("well-measured Gaussian operator stays below one") {
        Rng op_rng(67);
        const auto op = gaussian_operator(Shape({4, 4, 4}), 50, op_rng);
        Rng rng(5);
        const CertificateReport rep = check_rip_uniqueness(op, RankTuple({1, 1, 1}), 50, rng, 20);
        CHECK(rep.estimate < 1.0);
        CHECK(rep.verdict == CertificateVerdict::holds_on_samples);
    }
    SUBCASE("doubled rank must fit the dimensions") {
        const auto op = orthogonal_square_operator(Shape({3, 3, 3}), 68);
        Rng rng(6);
        CHECK_THROWS_AS(check_rip_uniqueness(op, RankTuple({2, 2, 2}), 5, rng, 5),
                        std::invalid_argument);
    }
}

// A violated null-space certificate comes with two equal-measurement tensors
// the program cannot tell apart, so uniform recovery at that rank fails.
TEST_CASE("violated certificates defeat recovery") {
    const Shape shape({3, 3, 3});
    const auto op = SensingOperator::mask(shape, {0});
    const RankTuple r({1, 1, 1});
    Rng rng(9);
    const CertificateReport rep = check_nsp(op, r, 10, rng);
    REQUIRE(rep.verdict == CertificateVerdict::violated);
    const DenseTensor& h = *rep.witness;

    DenseTensor x_a = truncate_hosvd(h, r);
    REQUIRE(frobenius_norm(x_a) > 1e-6);
    DenseTensor x_b(shape);
    x_b.vec() = x_a.vec() - h.vec();

    // identical measurements by construction
    CHECK((apply(op, x_a) - apply(op, x_b)).norm() <= 1e-12);

    SolverConfig cfg;
    cfg.max_iters = 3000;
    cfg.tol_rel_change = 1e-10;
    const SolverReport sol = solve_equality(op, apply(op, x_a), Objective::trace_norm(), cfg);
    const double obj_a = tensor_trace_norm(x_a);
    // the program finds something at least as good as the rank-r truth...
    CHECK(tensor_trace_norm(sol.solution) <= obj_a + 1e-6 * std::max(1.0, obj_a));
    // ...and it is not the truth: recovery fails at this rank
    CHECK(relative_error(sol.solution, x_a) > 0.1);
}
