// lrtr: low-rank tensor recovery by trace-norm and augmented trace-norm
// minimization, with executable recovery-guarantee checkers.
//
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include "lrtr/experiments.hpp"
#include "lrtr/guarantees.hpp"
#include "lrtr/io.hpp"
#include "lrtr/linalg.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace lrtr;

struct GlobalFlags {
    std::uint64_t seed = 0;
    std::string out;
    bool quiet = false;
};

void emit(const GlobalFlags& g, const std::string& text) {
    if (!g.out.empty())
        write_text_file(g.out, text);
    else if (!g.quiet)
        std::cout << text;
}

void note(const GlobalFlags& g, const std::string& line) {
    if (!g.quiet) std::cerr << line << '\n';
}

RankTuple rank_tuple(const std::vector<index_t>& ranks) { return RankTuple(ranks); }

std::vector<double> mode_spectral_norms(const DenseTensor& t) {
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(t.order()));
    for (index_t mode = 0; mode < t.order(); ++mode)
        s.push_back(spectral_norm(unfold(t, mode)));
    return s;
}

int run_gen(const GlobalFlags& g, const std::vector<index_t>& dims,
            const std::vector<index_t>& ranks) {
    Rng rng(g.seed);
    const DenseTensor t = random_low_rank(Shape(dims), rank_tuple(ranks), rng);
    emit(g, format_tensor(t));
    return 0;
}

int run_complete(const GlobalFlags& g, const std::string& tensor_path, double p,
                 const std::string& mask_path, const std::vector<std::string>& objective_args,
                 SolverConfig solver_cfg) {
    const DenseTensor x0 = read_tensor_file(tensor_path);
    SensingOperator op = mask_path.empty()
                             ? [&] {
                                   Rng rng(g.seed);
                                   return random_mask(x0.shape(), p, rng);
                               }()
                             : read_mask_file(mask_path, x0.shape());

    solver_cfg.record_history = true;
    solver_cfg.reference_solution = x0;

    std::vector<std::pair<ObjectiveSpec, SolverReport>> runs;
    std::vector<double> alphas;
    for (const auto& arg : objective_args) {
        const ObjectiveSpec spec = ObjectiveSpec::parse(arg);
        runs.emplace_back(spec, solve_completion(x0, op, spec.resolve(x0), solver_cfg));
        alphas.push_back(spec.resolve_alpha(x0));
        note(g, spec.label() + ": relative_error=" +
                    format_double(runs.back().second.history.back().relative_error.value_or(0.0)) +
                    " iterations=" + std::to_string(runs.back().second.iterations_used));
    }
    emit(g, solver_runs_csv(runs, alphas));
    return 0;
}

int run_recover(const GlobalFlags& g, const std::string& tensor_path, index_t m,
                const std::vector<std::string>& objective_args, SolverConfig solver_cfg) {
    const DenseTensor x0 = read_tensor_file(tensor_path);
    Rng rng(g.seed);
    const SensingOperator op = gaussian_operator(x0.shape(), m, rng);
    const Vector b = apply(op, x0);

    solver_cfg.record_history = true;
    solver_cfg.reference_solution = x0;

    std::vector<std::pair<ObjectiveSpec, SolverReport>> runs;
    std::vector<double> alphas;
    for (const auto& arg : objective_args) {
        const ObjectiveSpec spec = ObjectiveSpec::parse(arg);
        runs.emplace_back(spec, solve_equality(op, b, spec.resolve(x0), solver_cfg));
        alphas.push_back(spec.resolve_alpha(x0));
        note(g, spec.label() + ": relative_error=" +
                    format_double(runs.back().second.history.back().relative_error.value_or(0.0)) +
                    " iterations=" + std::to_string(runs.back().second.iterations_used));
    }
    emit(g, solver_runs_csv(runs, alphas));
    return 0;
}

std::string certify_row(const char* check, const CertificateReport& rep, double alpha_bound) {
    std::string row = "1,";
    row += check;
    row += ',';
    row += to_string(rep.kind);
    row += ',' + format_double(rep.estimate);
    row += ',';
    if (rep.ssp_delta_hat) row += format_double(*rep.ssp_delta_hat);
    row += ',' + std::to_string(rep.samples_used);
    row += ',';
    row += to_string(rep.verdict);
    row += ',';
    if (rep.witness) row += format_double(frobenius_norm(*rep.witness));
    row += ',';
    if (rep.kind == CertificateKind::rip && rep.estimate < 1.0)
        row += format_double(theta(rep.estimate));
    row += ',' + format_double(alpha_bound);
    row += '\n';
    return row;
}

int run_certify(const GlobalFlags& g, const std::vector<index_t>& dims,
                const std::vector<index_t>& ranks, const std::string& op_kind, double p,
                index_t m, double alpha, double spectral, int samples, int refine) {
    const Shape shape(dims);
    const RankTuple r = rank_tuple(ranks);
    Rng op_rng(g.seed);
    SensingOperator op = op_kind == "gaussian"
                             ? gaussian_operator(shape, m, op_rng)
                             : random_mask(shape, p, op_rng);
    const std::vector<double> norms(static_cast<std::size_t>(shape.order()), spectral);
    const double alpha_bound = alpha_lower_bound(rip_threshold_augmented(), spectral);

    std::string csv =
        "schema,check,kind,estimate,delta_hat,samples,verdict,witness_norm,theta_at_estimate,"
        "alpha_bound\n";
    {
        Rng rng(g.seed + 1);
        CertificateReport rep = check_nsp(op, r, samples, rng);
        rep.seed = g.seed;
        csv += certify_row("nsp", rep, alpha_bound);
    }
    {
        Rng rng(g.seed + 1);
        CertificateReport rep = check_nsp_augmented(op, r, alpha, norms, samples, rng);
        rep.seed = g.seed;
        csv += certify_row("nsp-augmented", rep, alpha_bound);
    }
    {
        Rng rng(g.seed + 2);
        CertificateReport rep = estimate_rip(op, r, samples, refine, rng);
        rep.seed = g.seed;
        csv += certify_row("rip", rep, alpha_bound);
    }
    {
        bool fits = true;
        for (index_t n = 0; n < r.order(); ++n)
            if (2 * r.rank(n) > shape.dim(n)) fits = false;
        if (fits) {
            Rng rng(g.seed + 2);
            CertificateReport rep = check_rip_uniqueness(op, r, samples, rng, refine);
            rep.seed = g.seed;
            csv += certify_row("rip-uniqueness", rep, alpha_bound);
        }
    }
    {
        Rng rng(g.seed + 3);
        CertificateReport rep = estimate_ssp(op, samples, refine, rng);
        rep.seed = g.seed;
        csv += certify_row("ssp", rep, alpha_bound);
    }
    emit(g, csv);
    return 0;
}

int run_experiment(const GlobalFlags& g, const std::string& config_path) {
    ExperimentConfig cfg;
    try {
        cfg = parse_experiment_config(read_text_file(config_path));
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << '\n';
        return 2;
    }
    emit(g, run_experiment_csv(cfg));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-rank tensor recovery: trace-norm models, solvers, and certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--seed", g.seed, "RNG seed (default 0)");
    app.add_option("--out", g.out, "Write output to this file instead of stdout");
    app.add_flag("--quiet", g.quiet, "Suppress progress notes");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random low-rank tensor file");
    std::vector<index_t> gen_dims;
    std::vector<index_t> gen_ranks;
    gen->add_option("dims", gen_dims, "Tensor dimensions I_1 ... I_N")->required()->expected(-1);
    gen->add_option("--ranks", gen_ranks, "Multilinear ranks r_1 ... r_N")->required();

    // shared solver flags
    SolverConfig solver_cfg;
    solver_cfg.max_iters = 2000;
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--max-iters", solver_cfg.max_iters, "Iteration cap");
        cmd->add_option("--tol-rel-change", solver_cfg.tol_rel_change, "Relative-change tolerance");
        cmd->add_option("--tol-feas", solver_cfg.tol_feas, "Feasibility tolerance");
        cmd->add_option("--rho", solver_cfg.penalty, "ADMM penalty");
    };

    // complete
    auto* complete = app.add_subcommand("complete", "Tensor completion from sampled entries");
    std::string complete_tensor;
    double complete_p = 0.5;
    std::string complete_mask;
    std::vector<std::string> complete_objectives;
    complete->add_option("tensor", complete_tensor, "Ground-truth tensor file")->required();
    complete->add_option("--p", complete_p, "Sampling fraction (mask drawn from --seed)");
    complete->add_option("--mask", complete_mask, "Mask file (overrides --p)");
    complete->add_option("--objective", complete_objectives,
                         "trace-norm or augmented:<mult>:<fro|spec> (repeatable)");
    add_solver_flags(complete);

    // recover
    auto* recover = app.add_subcommand("recover", "Recovery from Gaussian linear measurements");
    std::string recover_tensor;
    index_t recover_m = 0;
    std::vector<std::string> recover_objectives;
    recover->add_option("tensor", recover_tensor, "Ground-truth tensor file")->required();
    recover->add_option("--m", recover_m, "Number of measurements")->required();
    recover->add_option("--objective", recover_objectives,
                        "trace-norm or augmented:<mult>:<fro|spec> (repeatable)");
    add_solver_flags(recover);

    // certify
    auto* certify = app.add_subcommand("certify", "Run NSP/RIP/SSP certificate estimators");
    std::vector<index_t> certify_dims;
    std::vector<index_t> certify_ranks;
    std::string certify_op = "gaussian";
    double certify_p = 0.5;
    index_t certify_m = 1;
    double certify_alpha = 1.0;
    double certify_spectral = 1.0;
    int certify_samples = 1000;
    int certify_refine = 50;
    certify->add_option("--shape", certify_dims, "Domain dimensions")->required();
    certify->add_option("--ranks", certify_ranks, "Rank tuple")->required();
    certify->add_option("--operator", certify_op, "mask or gaussian")
        ->check(CLI::IsMember({"mask", "gaussian"}));
    certify->add_option("--p", certify_p, "Mask sampling fraction");
    certify->add_option("--m", certify_m, "Gaussian measurement count");
    certify->add_option("--alpha", certify_alpha, "Augmented-model alpha");
    certify->add_option("--spectral-norm", certify_spectral,
                        "Assumed max mode spectral norm of the ground truth");
    certify->add_option("--samples", certify_samples, "Samples per certificate");
    certify->add_option("--refine", certify_refine, "Refinement steps per sample");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a trial matrix from a config file");
    std::string experiment_config;
    experiment->add_option("config", experiment_config, "key = value config file")->required();

    // theta
    auto* theta_cmd = app.add_subcommand("theta", "Evaluate theta(delta)");
    double theta_delta = 0.0;
    theta_cmd->add_option("delta", theta_delta, "RIP constant in [0, 1)")->required();

    // alpha-bound
    auto* bound_cmd = app.add_subcommand("alpha-bound", "Evaluate alpha_lower_bound(delta, s)");
    double bound_delta = 0.0;
    double bound_spectral = 1.0;
    bound_cmd->add_option("delta", bound_delta, "RIP constant in [0, 1)")->required();
    bound_cmd->add_option("spectral", bound_spectral, "Mode spectral norm of the ground truth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*gen) return run_gen(g, gen_dims, gen_ranks);
        if (*complete) {
            if (complete_objectives.empty()) complete_objectives = {"trace-norm"};
            return run_complete(g, complete_tensor, complete_p, complete_mask,
                                complete_objectives, solver_cfg);
        }
        if (*recover) {
            if (recover_objectives.empty()) recover_objectives = {"trace-norm"};
            return run_recover(g, recover_tensor, recover_m, recover_objectives, solver_cfg);
        }
        if (*certify)
            return run_certify(g, certify_dims, certify_ranks, certify_op, certify_p, certify_m,
                               certify_alpha, certify_spectral, certify_samples, certify_refine);
        if (*experiment) return run_experiment(g, experiment_config);
        if (*theta_cmd) {
            emit(g, format_double(theta(theta_delta)) + "\n");
            return 0;
        }
        if (*bound_cmd) {
            emit(g, format_double(alpha_lower_bound(bound_delta, bound_spectral)) + "\n");
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
