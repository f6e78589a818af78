#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>

namespace lrtr {

using index_t = std::int64_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Deterministic random stream. The engine (mt19937_64) has a
/// standard-specified sequence; the distributions below are implemented
/// here instead of via std::*_distribution so that a given seed yields
/// the same draws on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent substream derived from (seed, index), e.g. one per trial.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index),
                          static_cast<std::uint32_t>(index >> 32)};
        Rng r(0);
        r.engine_.seed(seq);
        r.cached_ = false;
        return r;
    }

    std::uint64_t raw() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (second value of each pair is cached).
    double normal() {
        if (cached_) {
            cached_ = false;
            return cache_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        cached_ = true;
        return r * std::cos(a);
    }

    /// Uniform integer in [0, n), unbiased (rejection sampling).
    index_t uniform_below(index_t n) {
        const auto un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return static_cast<index_t>(draw % un);
    }

private:
    std::mt19937_64 engine_;
    bool cached_ = false;
    double cache_ = 0.0;
};

inline Vector normal_vector(index_t n, Rng& rng) {
    Vector v(n);
    for (index_t i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

/// Filled column by column so the draw order is part of the contract.
inline Matrix normal_matrix(index_t rows, index_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (index_t j = 0; j < cols; ++j)
        for (index_t i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

}  // namespace lrtr
