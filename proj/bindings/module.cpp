#include "lrtr/experiments.hpp"
#include "lrtr/guarantees.hpp"
#include "lrtr/io.hpp"
#include "lrtr/linalg.hpp"
#include "lrtr/solvers.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace lrtr;

namespace {

// Tensors cross the boundary as numpy arrays; the canonical element order is
// first-index-fastest, i.e. Fortran order.
using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

DenseTensor to_tensor(const FArray& arr) {
    std::vector<index_t> dims(static_cast<std::size_t>(arr.ndim()));
    for (py::ssize_t i = 0; i < arr.ndim(); ++i)
        dims[static_cast<std::size_t>(i)] = arr.shape(i);
    Vector data(arr.size());
    std::copy(arr.data(), arr.data() + arr.size(), data.data());
    return DenseTensor(Shape(std::move(dims)), std::move(data));
}

py::array from_tensor(const DenseTensor& t) {
    const auto& dims = t.shape().dims();
    std::vector<py::ssize_t> shape(dims.begin(), dims.end());
    py::array_t<double, py::array::f_style> arr(shape);
    std::copy(t.vec().data(), t.vec().data() + t.size(), arr.mutable_data());
    return arr;
}

RankTuple to_ranks(const std::vector<index_t>& r) { return RankTuple(r); }

SolverConfig make_config(int max_iters, double tol_rel_change, double tol_feas, double rho,
                         bool record_history, const std::optional<FArray>& reference) {
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.tol_rel_change = tol_rel_change;
    cfg.tol_feas = tol_feas;
    cfg.penalty = rho;
    cfg.record_history = record_history;
    if (reference) cfg.reference_solution = to_tensor(*reference);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Low-rank tensor recovery: trace-norm models, solvers, and certificates";

    // tensor algebra
    m.def("unfold", [](const FArray& t, index_t mode) { return Matrix(unfold(to_tensor(t), mode)); },
          py::arg("tensor"), py::arg("mode"));
    m.def("refold",
          [](const Matrix& mat, index_t mode, const std::vector<index_t>& shape) {
              return from_tensor(refold(mat, mode, Shape(shape)));
          },
          py::arg("matrix"), py::arg("mode"), py::arg("shape"));
    m.def("mode_n_product",
          [](const FArray& t, const Matrix& u, index_t mode) {
              return from_tensor(mode_n_product(to_tensor(t), u, mode));
          },
          py::arg("tensor"), py::arg("matrix"), py::arg("mode"));
    m.def("inner", [](const FArray& a, const FArray& b) { return inner(to_tensor(a), to_tensor(b)); });
    m.def("frobenius_norm", [](const FArray& t) { return frobenius_norm(to_tensor(t)); });
    m.def("relative_error",
          [](const FArray& x, const FArray& x0) { return relative_error(to_tensor(x), to_tensor(x0)); });
    m.def("tensor_trace_norm", [](const FArray& t) { return tensor_trace_norm(to_tensor(t)); });

    // multilinear
    py::class_<HosvdFactorization>(m, "Hosvd")
        .def_property_readonly("core", [](const HosvdFactorization& f) { return from_tensor(f.core); })
        .def_property_readonly("factors",
                               [](const HosvdFactorization& f) { return f.factors; })
        .def_property_readonly("mode_singular_values",
                               [](const HosvdFactorization& f) { return f.mode_singular_values; });
    m.def("hosvd", [](const FArray& t) { return hosvd(to_tensor(t)); });
    m.def("n_rank",
          [](const FArray& t, double tol) { return n_rank(to_tensor(t), tol).ranks; },
          py::arg("tensor"), py::arg("tol") = 1e-8);
    m.def("truncate_hosvd",
          [](const FArray& t, const std::vector<index_t>& r) {
              return from_tensor(truncate_hosvd(to_tensor(t), to_ranks(r)));
          },
          py::arg("tensor"), py::arg("ranks"));
    m.def("random_low_rank",
          [](const std::vector<index_t>& shape, const std::vector<index_t>& r, std::uint64_t seed) {
              Rng rng(seed);
              return from_tensor(random_low_rank(Shape(shape), to_ranks(r), rng));
          },
          py::arg("shape"), py::arg("ranks"), py::arg("seed"));

    // proximal operators and constants
    m.def("svt", &svt, py::arg("matrix"), py::arg("tau"));
    m.def("augmented_prox", &augmented_prox, py::arg("matrix"), py::arg("tau"), py::arg("alpha"));
    m.def("theta", &theta, py::arg("delta"));
    m.def("alpha_lower_bound", &alpha_lower_bound, py::arg("delta"), py::arg("spectral_norm"));
    m.def("rip_threshold_plain", &rip_threshold_plain);
    m.def("rip_threshold_augmented", &rip_threshold_augmented);

    // sensing operators
    py::class_<SensingOperator>(m, "SensingOperator")
        .def_property_readonly("kind",
                               [](const SensingOperator& op) {
                                   return op.kind() == OperatorKind::mask ? "mask" : "dense";
                               })
        .def_property_readonly("shape",
                               [](const SensingOperator& op) { return op.domain().dims(); })
        .def_property_readonly("num_measurements", &SensingOperator::num_measurements)
        .def_property_readonly("omega", &SensingOperator::omega)
        .def("apply", [](const SensingOperator& op, const FArray& t) {
            return Vector(apply(op, to_tensor(t)));
        })
        .def("adjoint", [](const SensingOperator& op, const Vector& y) {
            return from_tensor(adjoint(op, y));
        })
        .def("to_matrix", [](const SensingOperator& op) { return to_matrix(op); });
    m.def("random_mask",
          [](const std::vector<index_t>& shape, double p, std::uint64_t seed) {
              Rng rng(seed);
              return random_mask(Shape(shape), p, rng);
          },
          py::arg("shape"), py::arg("p"), py::arg("seed"));
    m.def("gaussian_operator",
          [](const std::vector<index_t>& shape, index_t count, std::uint64_t seed) {
              Rng rng(seed);
              return gaussian_operator(Shape(shape), count, rng);
          },
          py::arg("shape"), py::arg("m"), py::arg("seed"));
    m.def("mask_from_omega",
          [](const std::vector<index_t>& shape, std::vector<index_t> omega) {
              return SensingOperator::mask(Shape(shape), std::move(omega));
          },
          py::arg("shape"), py::arg("omega"), "Mask from 0-based linear indices");

    // objectives and solvers
    py::class_<Objective>(m, "Objective")
        .def_static("trace_norm", &Objective::trace_norm)
        .def_static("augmented", &Objective::augmented, py::arg("alpha"))
        .def_property_readonly("alpha", [](const Objective& o) { return o.alpha; })
        .def_property_readonly("kind", [](const Objective& o) {
            return o.is_augmented() ? "augmented" : "trace-norm";
        });
    m.def("objective_value", [](const FArray& t, const Objective& obj) {
        return objective_value(to_tensor(t), obj);
    });

    py::class_<HistoryEntry>(m, "HistoryEntry")
        .def_readonly("iteration", &HistoryEntry::iteration)
        .def_readonly("objective", &HistoryEntry::objective)
        .def_readonly("feasibility", &HistoryEntry::feasibility)
        .def_readonly("relative_error", &HistoryEntry::relative_error);
    py::class_<SolverReport>(m, "SolverReport")
        .def_property_readonly("solution",
                               [](const SolverReport& r) { return from_tensor(r.solution); })
        .def_readonly("iterations_used", &SolverReport::iterations_used)
        .def_property_readonly("status",
                               [](const SolverReport& r) {
                                   return r.status == SolverStatus::converged ? "converged"
                                                                              : "max-iters";
                               })
        .def_readonly("history", &SolverReport::history);

    m.def("solve_completion",
          [](const FArray& observed, const SensingOperator& op, const Objective& obj,
             int max_iters, double tol_rel_change, double tol_feas, double rho,
             bool record_history, const std::optional<FArray>& reference) {
              return solve_completion(to_tensor(observed), op, obj,
                                      make_config(max_iters, tol_rel_change, tol_feas, rho,
                                                  record_history, reference));
          },
          py::arg("observed"), py::arg("mask"), py::arg("objective"), py::arg("max_iters") = 500,
          py::arg("tol_rel_change") = 1e-8, py::arg("tol_feas") = 1e-9, py::arg("rho") = 1.0,
          py::arg("record_history") = false, py::arg("reference") = std::nullopt);
    m.def("solve_equality",
          [](const SensingOperator& op, const Vector& b, const Objective& obj, int max_iters,
             double tol_rel_change, double tol_feas, double rho, bool record_history,
             const std::optional<FArray>& reference) {
              return solve_equality(op, b, obj,
                                    make_config(max_iters, tol_rel_change, tol_feas, rho,
                                                record_history, reference));
          },
          py::arg("op"), py::arg("b"), py::arg("objective"), py::arg("max_iters") = 500,
          py::arg("tol_rel_change") = 1e-8, py::arg("tol_feas") = 1e-9, py::arg("rho") = 1.0,
          py::arg("record_history") = false, py::arg("reference") = std::nullopt);
    m.def("solve_noisy",
          [](const SensingOperator& op, const Vector& b, double lambda, const Objective& obj,
             int max_iters, double tol_rel_change, double tol_feas, double rho,
             bool record_history, const std::optional<FArray>& reference) {
              return solve_noisy(op, b, lambda, obj,
                                 make_config(max_iters, tol_rel_change, tol_feas, rho,
                                             record_history, reference));
          },
          py::arg("op"), py::arg("b"), py::arg("lambda_"), py::arg("objective"),
          py::arg("max_iters") = 500, py::arg("tol_rel_change") = 1e-8,
          py::arg("tol_feas") = 1e-9, py::arg("rho") = 1.0, py::arg("record_history") = false,
          py::arg("reference") = std::nullopt);

    // certificates
    py::class_<CertificateReport>(m, "CertificateReport")
        .def_property_readonly("kind",
                               [](const CertificateReport& r) { return to_string(r.kind); })
        .def_readonly("estimate", &CertificateReport::estimate)
        .def_readonly("samples_used", &CertificateReport::samples_used)
        .def_property_readonly("witness",
                               [](const CertificateReport& r) -> py::object {
                                   if (!r.witness) return py::none();
                                   return from_tensor(*r.witness);
                               })
        .def_property_readonly("verdict",
                               [](const CertificateReport& r) { return to_string(r.verdict); })
        .def_readonly("delta_hat", &CertificateReport::ssp_delta_hat)
        .def("serialize", &serialize_certificate);

    m.def("check_nsp",
          [](const SensingOperator& op, const std::vector<index_t>& r, int n_samples,
             std::uint64_t seed) {
              Rng rng(seed);
              CertificateReport rep = check_nsp(op, to_ranks(r), n_samples, rng);
              rep.seed = seed;
              return rep;
          },
          py::arg("op"), py::arg("ranks"), py::arg("n_samples") = 1000, py::arg("seed") = 0);
    m.def("check_nsp_augmented",
          [](const SensingOperator& op, const std::vector<index_t>& r, double alpha,
             const std::vector<double>& spectral_norms, int n_samples, std::uint64_t seed) {
              Rng rng(seed);
              CertificateReport rep =
                  check_nsp_augmented(op, to_ranks(r), alpha, spectral_norms, n_samples, rng);
              rep.seed = seed;
              return rep;
          },
          py::arg("op"), py::arg("ranks"), py::arg("alpha"), py::arg("spectral_norms"),
          py::arg("n_samples") = 1000, py::arg("seed") = 0);
    m.def("estimate_rip",
          [](const SensingOperator& op, const std::vector<index_t>& r, int n_samples,
             int refine_steps, std::uint64_t seed) {
              Rng rng(seed);
              CertificateReport rep = estimate_rip(op, to_ranks(r), n_samples, refine_steps, rng);
              rep.seed = seed;
              return rep;
          },
          py::arg("op"), py::arg("ranks"), py::arg("n_samples") = 200,
          py::arg("refine_steps") = 50, py::arg("seed") = 0);
    m.def("estimate_ssp",
          [](const SensingOperator& op, int n_samples, int refine_steps, std::uint64_t seed) {
              Rng rng(seed);
              CertificateReport rep = estimate_ssp(op, n_samples, refine_steps, rng);
              rep.seed = seed;
              return rep;
          },
          py::arg("op"), py::arg("n_samples") = 1000, py::arg("refine_steps") = 50,
          py::arg("seed") = 0);
    m.def("check_ssp_sufficient",
          [](index_t count, double delta, const std::vector<index_t>& r, double alpha,
             const std::vector<double>& spectral_norms) {
              return check_ssp_sufficient(count, delta, to_ranks(r), alpha, spectral_norms);
          },
          py::arg("m"), py::arg("delta"), py::arg("ranks"), py::arg("alpha"),
          py::arg("spectral_norms"));
    m.def("check_rip_uniqueness",
          [](const SensingOperator& op, const std::vector<index_t>& r, int n_samples,
             std::uint64_t seed, int refine_steps) {
              Rng rng(seed);
              CertificateReport rep = check_rip_uniqueness(op, to_ranks(r), n_samples, rng,
                                                           refine_steps);
              rep.seed = seed;
              return rep;
          },
          py::arg("op"), py::arg("ranks"), py::arg("n_samples") = 200, py::arg("seed") = 0,
          py::arg("refine_steps") = 50);

    // text formats
    m.def("format_tensor", [](const FArray& t) { return format_tensor(to_tensor(t)); });
    m.def("parse_tensor", [](const std::string& text) { return from_tensor(parse_tensor(text)); });
}
