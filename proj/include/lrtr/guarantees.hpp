#pragma once

#include "lrtr/hosvd.hpp"
#include "lrtr/operators.hpp"

#include <optional>
#include <vector>

namespace lrtr {

enum class CertificateKind { nsp, nsp_augmented, rip, ssp };
enum class CertificateVerdict { holds_on_samples, violated, inconclusive };

/// Outcome of a sampled certificate check. These are estimates over sampled
/// (and locally refined) points, never proofs: "holds_on_samples" means no
/// counterexample was found, "violated" comes with a concrete witness.
struct CertificateReport {
    CertificateKind kind = CertificateKind::nsp;
    /// delta lower bound (rip), minimum trace/Frobenius ratio (ssp), or
    /// minimum inequality margin (nsp kinds).
    double estimate = 0.0;
    int samples_used = 0;
    std::optional<DenseTensor> witness;
    CertificateVerdict verdict = CertificateVerdict::inconclusive;
    /// Filled by callers that know the seed; carried into serialization.
    std::uint64_t seed = 0;
    /// ssp only: Delta-hat = m / estimate^2 (optimistic, see estimate_ssp).
    std::optional<double> ssp_delta_hat;
};

/// theta(delta) = sqrt(4 (1 + 5 delta - 4 delta^2) / ((1 - delta)(32 - 25 delta))),
/// defined on [0, 1); equals 1 exactly at delta = (77 - sqrt(1337)) / 82.
double theta(double delta);

/// Per-mode lower bound on alpha for augmented-model recovery at RIP level
/// delta: spectral_norm * theta / (1 - theta). Throws when theta(delta) >= 1.
double alpha_lower_bound(double delta, double spectral_norm);

/// RIP thresholds for exact recovery: (77 - sqrt(1337)) / 82 ~= 0.4931 for
/// the plain model, 0.4404 for the augmented model.
double rip_threshold_plain();
double rip_threshold_augmented();

/// Samples the null space of the materialized operator and evaluates the
/// null-space-property margin
///   sum_i sum_{j > r_i} sigma_j(H_(i)) - sum_i sum_{j <= r_i} sigma_j(H_(i))
/// on unit-Frobenius elements, with a few subgradient-descent and low-rank
/// probe refinements per sample. Violated (margin < -1e-10) reports carry
/// the offending H as witness.
CertificateReport check_nsp(const SensingOperator& op, const RankTuple& r,
                            int n_samples, Rng& rng);

/// Same sampling scheme against the augmented inequality, whose head sums
/// are weighted by (1 + spectral_norms[i] / alpha). Coincides with check_nsp
/// as alpha -> infinity.
CertificateReport check_nsp_augmented(const SensingOperator& op, const RankTuple& r,
                                      double alpha, const std::vector<double>& spectral_norms,
                                      int n_samples, Rng& rng);

/// Lower bound on the tensor RIP constant delta_(r_1,...,r_N): the maximum
/// of |  ||F(X)||^2 - 1 | over sampled unit-Frobenius tensors of multilinear
/// rank <= r, refined by projected gradient ascent. Sample sets are nested
/// across rank tuples (lower-rank truncations of shared base draws), so
/// estimates are monotone under the componentwise order.
CertificateReport estimate_rip(const SensingOperator& op, const RankTuple& r,
                               int n_samples, int refine_steps, Rng& rng);

/// Minimum of ||H||_* / ||H||_F over sampled unit null-space elements,
/// refined by projected subgradient descent; also reports
/// Delta-hat = m / rho_min^2. Optimistic: the true minimum ratio may be
/// lower, hence the true Delta larger. Inconclusive on a trivial null space.
CertificateReport estimate_ssp(const SensingOperator& op, int n_samples,
                               int refine_steps, Rng& rng);

/// Theorem-style sufficiency arithmetic: per mode i, checks
/// m >= (2 + spectral_norms[i] / alpha)^2 * r_i * delta.
std::vector<bool> check_ssp_sufficient(index_t m, double delta, const RankTuple& r,
                                       double alpha, const std::vector<double>& spectral_norms);

/// Runs estimate_rip at doubled ranks; holds-on-samples iff the estimate is
/// below 1. Evidence only: a lower-bound estimate < 1 cannot prove the
/// uniqueness condition, but an estimate >= 1 refutes it.
CertificateReport check_rip_uniqueness(const SensingOperator& op, const RankTuple& r,
                                       int n_samples, Rng& rng, int refine_steps = 50);

const char* to_string(CertificateKind kind);
const char* to_string(CertificateVerdict verdict);

}  // namespace lrtr
