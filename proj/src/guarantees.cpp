#include "lrtr/guarantees.hpp"

#include "lrtr/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrtr {

double theta(double delta) {
    if (!(delta >= 0.0) || !(delta < 1.0))
        throw std::invalid_argument("theta: delta must be in [0, 1)");
    const double num = 4.0 * (1.0 + 5.0 * delta - 4.0 * delta * delta);
    const double den = (1.0 - delta) * (32.0 - 25.0 * delta);
    return std::sqrt(num / den);
}

double alpha_lower_bound(double delta, double spectral_norm) {
    if (spectral_norm < 0.0)
        throw std::invalid_argument("alpha_lower_bound: spectral_norm must be >= 0");
    const double th = theta(delta);
    if (th >= 1.0)
        throw std::invalid_argument("alpha_lower_bound: theta(delta) >= 1, bound undefined");
    return spectral_norm * th / (1.0 - th);
}

double rip_threshold_plain() { return (77.0 - std::sqrt(1337.0)) / 82.0; }

double rip_threshold_augmented() { return 0.4404; }

const char* to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::nsp: return "nsp";
        case CertificateKind::nsp_augmented: return "nsp-augmented";
        case CertificateKind::rip: return "rip";
        case CertificateKind::ssp: return "ssp";
    }
    return "?";
}

const char* to_string(CertificateVerdict verdict) {
    switch (verdict) {
        case CertificateVerdict::holds_on_samples: return "holds-on-samples";
        case CertificateVerdict::violated: return "violated";
        case CertificateVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

constexpr double kViolationMargin = 1e-10;
constexpr int kNspRefineSteps = 25;

// Margin of the (possibly weighted) null-space inequality at H:
//   sum_i [ sum_{j > r_i} sigma_j(H_(i)) - w_i * sum_{j <= r_i} sigma_j(H_(i)) ].
// Optionally emits a subgradient for descent refinement.
double nsp_margin(const DenseTensor& h, const RankTuple& r, const std::vector<double>& w,
                  DenseTensor* subgrad) {
    double margin = 0.0;
    if (subgrad) *subgrad = DenseTensor(h.shape());
    for (index_t mode = 0; mode < h.order(); ++mode) {
        const SvdResult dec = svd(unfold(h, mode));
        const index_t rn = r.rank(mode);
        const double wn = w[static_cast<std::size_t>(mode)];
        Vector d(dec.s.size());
        for (index_t j = 0; j < dec.s.size(); ++j) {
            if (j < rn) {
                margin -= wn * dec.s(j);
                d(j) = -wn;
            } else {
                margin += dec.s(j);
                d(j) = dec.s(j) > 0.0 ? 1.0 : 0.0;
            }
        }
        if (subgrad)
            subgrad->vec() +=
                refold(dec.u * d.asDiagonal() * dec.v.transpose(), mode, h.shape()).vec();
    }
    return margin;
}

CertificateReport run_nsp_check(const SensingOperator& op, const RankTuple& r,
                                const std::vector<double>& weights, CertificateKind kind,
                                int n_samples, Rng& rng) {
    if (!r.fits(op.domain()))
        throw std::invalid_argument("check_nsp: rank tuple does not fit operator domain");
    if (n_samples < 1) throw std::invalid_argument("check_nsp: n_samples must be >= 1");

    CertificateReport rep;
    rep.kind = kind;
    const Matrix basis = null_space_basis(to_matrix(op));
    if (basis.cols() == 0) {
        rep.verdict = CertificateVerdict::holds_on_samples;  // vacuous
        rep.samples_used = 0;
        rep.estimate = std::numeric_limits<double>::infinity();
        return rep;
    }

    const Shape& shape = op.domain();
    double best_margin = std::numeric_limits<double>::infinity();
    DenseTensor best_h;

    auto consider = [&](const DenseTensor& cand) {
        const double m = nsp_margin(cand, r, weights, nullptr);
        if (m < best_margin) {
            best_margin = m;
            best_h = cand;
        }
    };
    // Re-projects onto the null space and the unit sphere; returns false for
    // numerically zero vectors.
    auto normalized_null = [&](const Vector& v, DenseTensor& out) {
        Vector p = basis * (basis.transpose() * v);
        const double n = p.norm();
        if (n < 1e-12) return false;
        out = DenseTensor(shape, p / n);
        return true;
    };

    for (int s = 0; s < n_samples; ++s) {
        const Vector g = normal_vector(basis.cols(), rng);
        DenseTensor cur;
        if (!normalized_null(basis * g, cur)) continue;
        consider(cur);
        for (int step = 0; step < kNspRefineSteps; ++step) {
            // Low-rank probe: margins minimize near rank-r null elements.
            DenseTensor probe;
            if (normalized_null(truncate_hosvd(cur, r).vec(), probe)) consider(probe);

            DenseTensor sg;
            nsp_margin(cur, r, weights, &sg);
            Vector dir = basis * (basis.transpose() * sg.vec());
            const double dn = dir.norm();
            if (dn < 1e-14) break;
            const double step_len = 0.5 / std::sqrt(static_cast<double>(step) + 1.0);
            DenseTensor next;
            if (!normalized_null(cur.vec() - (step_len / dn) * dir, next)) break;
            cur = next;
            consider(cur);
        }
    }

    rep.samples_used = n_samples;
    rep.estimate = best_margin;
    if (best_margin < -kViolationMargin) {
        rep.verdict = CertificateVerdict::violated;
        rep.witness = best_h;
    } else {
        rep.verdict = CertificateVerdict::holds_on_samples;
    }
    return rep;
}

struct RipEstimate {
    double value = 0.0;
    DenseTensor argmax;
    double argmax_map_norm = 0.0;  // ||F(argmax)|| at the extremum
};

// Enumerates all tuples (1..r_1) x ... x (1..r_N).
std::vector<RankTuple> tuples_below(const RankTuple& r) {
    std::vector<RankTuple> out;
    std::vector<index_t> cur(r.ranks.size(), 1);
    while (true) {
        out.emplace_back(cur);
        std::size_t k = 0;
        for (; k < cur.size(); ++k) {
            if (++cur[k] <= r.ranks[static_cast<std::size_t>(k)]) break;
            cur[k] = 1;
        }
        if (k == cur.size()) break;
    }
    return out;
}

RipEstimate rip_core(const SensingOperator& op, const RankTuple& r, int n_samples,
                     int refine_steps, Rng& rng) {
    if (!r.fits(op.domain()))
        throw std::invalid_argument("estimate_rip: rank tuple does not fit operator domain");
    for (index_t rn : r.ranks)
        if (rn < 1) throw std::invalid_argument("estimate_rip: ranks must be >= 1");
    if (n_samples < 1) throw std::invalid_argument("estimate_rip: n_samples must be >= 1");

    const Shape& shape = op.domain();
    const Matrix a = to_matrix(op);
    const double lips = 2.0 * (spectral_norm(a) * spectral_norm(a) + 1.0);
    const double step = 0.1 / lips;
    const auto tuples = tuples_below(r);

    RipEstimate best;
    best.value = -1.0;
    auto consider = [&](const DenseTensor& x) {
        const double map_norm = (a * x.vec()).norm();
        const double f = map_norm * map_norm - x.vec().squaredNorm();
        if (std::abs(f) > best.value) {
            best.value = std::abs(f);
            best.argmax = x;
            best.argmax_map_norm = map_norm;
        }
        return f;
    };

    for (int s = 0; s < n_samples; ++s) {
        const DenseTensor base(shape, normal_vector(shape.num_elements(), rng));
        for (const RankTuple& sub : tuples) {
            DenseTensor cur = truncate_hosvd(base, sub);
            double nrm = frobenius_norm(cur);
            if (nrm < 1e-14) continue;
            cur.vec() /= nrm;
            double f = consider(cur);
            // Projected gradient ascent on |f| within the rank-sub variety.
            for (int k = 0; k < refine_steps; ++k) {
                const double sign = f >= 0.0 ? 1.0 : -1.0;
                const Vector grad = 2.0 * (a.transpose() * (a * cur.vec()) - cur.vec());
                DenseTensor next =
                    truncate_hosvd(DenseTensor(shape, cur.vec() + sign * step * grad), sub);
                nrm = frobenius_norm(next);
                if (nrm < 1e-14) break;
                next.vec() /= nrm;
                cur = std::move(next);
                f = consider(cur);
            }
        }
    }
    if (best.value < 0.0) best.value = 0.0;
    return best;
}

}  // namespace

CertificateReport check_nsp(const SensingOperator& op, const RankTuple& r,
                            int n_samples, Rng& rng) {
    const std::vector<double> weights(static_cast<std::size_t>(op.domain().order()), 1.0);
    return run_nsp_check(op, r, weights, CertificateKind::nsp, n_samples, rng);
}

CertificateReport check_nsp_augmented(const SensingOperator& op, const RankTuple& r,
                                      double alpha, const std::vector<double>& spectral_norms,
                                      int n_samples, Rng& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("check_nsp_augmented: alpha must be > 0");
    if (spectral_norms.size() != static_cast<std::size_t>(op.domain().order()))
        throw std::invalid_argument("check_nsp_augmented: one spectral norm per mode required");
    std::vector<double> weights(spectral_norms.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (spectral_norms[i] < 0.0)
            throw std::invalid_argument("check_nsp_augmented: spectral norms must be >= 0");
        weights[i] = 1.0 + spectral_norms[i] / alpha;
    }
    return run_nsp_check(op, r, weights, CertificateKind::nsp_augmented, n_samples, rng);
}

CertificateReport estimate_rip(const SensingOperator& op, const RankTuple& r,
                               int n_samples, int refine_steps, Rng& rng) {
    const RipEstimate est = rip_core(op, r, n_samples, refine_steps, rng);
    CertificateReport rep;
    rep.kind = CertificateKind::rip;
    rep.estimate = est.value;
    rep.samples_used = n_samples;
    rep.verdict = CertificateVerdict::holds_on_samples;
    return rep;
}

CertificateReport estimate_ssp(const SensingOperator& op, int n_samples,
                               int refine_steps, Rng& rng) {
    if (n_samples < 1) throw std::invalid_argument("estimate_ssp: n_samples must be >= 1");
    CertificateReport rep;
    rep.kind = CertificateKind::ssp;
    const Matrix basis = null_space_basis(to_matrix(op));
    if (basis.cols() == 0) {
        rep.verdict = CertificateVerdict::inconclusive;  // condition vacuous
        rep.samples_used = 0;
        rep.estimate = std::numeric_limits<double>::infinity();
        return rep;
    }

    const Shape& shape = op.domain();
    const index_t n_modes = shape.order();
    const RankTuple ones(std::vector<index_t>(static_cast<std::size_t>(n_modes), 1));
    double best = std::numeric_limits<double>::infinity();

    auto normalized_null = [&](const Vector& v, DenseTensor& out) {
        Vector p = basis * (basis.transpose() * v);
        const double n = p.norm();
        if (n < 1e-12) return false;
        out = DenseTensor(shape, p / n);
        return true;
    };
    auto consider = [&](const DenseTensor& h) { best = std::min(best, tensor_trace_norm(h)); };

    for (int s = 0; s < n_samples; ++s) {
        const Vector g = normal_vector(basis.cols(), rng);
        DenseTensor cur;
        if (!normalized_null(basis * g, cur)) continue;
        consider(cur);
        for (int k = 0; k < refine_steps; ++k) {
            DenseTensor probe;
            if (normalized_null(truncate_hosvd(cur, ones).vec(), probe)) consider(probe);

            // Subgradient of the ratio on the unit sphere: d||H||_* minus the
            // radial component, restricted to the null space.
            DenseTensor sg(shape);
            for (index_t mode = 0; mode < n_modes; ++mode) {
                const SvdResult dec = svd(unfold(cur, mode));
                sg.vec() += refold(dec.u * dec.v.transpose(), mode, shape).vec() /
                            static_cast<double>(n_modes);
            }
            Vector dir = sg.vec() - sg.vec().dot(cur.vec()) * cur.vec();
            dir = basis * (basis.transpose() * dir);
            const double dn = dir.norm();
            if (dn < 1e-14) break;
            const double step_len = 0.5 / std::sqrt(static_cast<double>(k) + 1.0);
            DenseTensor next;
            if (!normalized_null(cur.vec() - (step_len / dn) * dir, next)) break;
            cur = next;
            consider(cur);
        }
    }

    rep.samples_used = n_samples;
    rep.estimate = best;
    rep.ssp_delta_hat = static_cast<double>(op.num_measurements()) / (best * best);
    rep.verdict = CertificateVerdict::holds_on_samples;
    return rep;
}

std::vector<bool> check_ssp_sufficient(index_t m, double delta, const RankTuple& r,
                                       double alpha, const std::vector<double>& spectral_norms) {
    if (m < 1 || !(delta > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("check_ssp_sufficient: inputs must be positive");
    if (spectral_norms.size() != r.ranks.size())
        throw std::invalid_argument("check_ssp_sufficient: one spectral norm per mode required");
    std::vector<bool> out(r.ranks.size());
    for (std::size_t i = 0; i < r.ranks.size(); ++i) {
        const double factor = 2.0 + spectral_norms[i] / alpha;
        out[i] = static_cast<double>(m) >=
                 factor * factor * static_cast<double>(r.ranks[i]) * delta;
    }
    return out;
}

CertificateReport check_rip_uniqueness(const SensingOperator& op, const RankTuple& r,
                                       int n_samples, Rng& rng, int refine_steps) {
    std::vector<index_t> doubled(r.ranks.size());
    for (std::size_t i = 0; i < r.ranks.size(); ++i) {
        doubled[i] = 2 * r.ranks[i];
        if (doubled[i] > op.domain().dim(static_cast<index_t>(i)))
            throw std::invalid_argument("check_rip_uniqueness: doubled rank exceeds dimension");
    }
    const RipEstimate est = rip_core(op, RankTuple(std::move(doubled)), n_samples,
                                     refine_steps, rng);
    CertificateReport rep;
    rep.kind = CertificateKind::rip;
    rep.estimate = est.value;
    rep.samples_used = n_samples;
    if (est.value < 1.0) {
        rep.verdict = CertificateVerdict::holds_on_samples;
    } else {
        rep.verdict = CertificateVerdict::violated;
        // A deflation extremum (F(X) ~ 0) is a genuine null-space witness.
        if (est.argmax_map_norm <= 1e-8) rep.witness = est.argmax;
    }
    return rep;
}

}  // namespace lrtr
