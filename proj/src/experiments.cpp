#include "lrtr/experiments.hpp"

#include "lrtr/io.hpp"
#include "lrtr/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lrtr {

std::string ObjectiveSpec::label() const {
    if (kind == ObjectiveKind::trace_norm) return "trace-norm";
    std::string out = "augmented:" + format_double(alpha_multiple) + ':';
    out += scale == Scale::frobenius ? "fro" : "spec";
    return out;
}

ObjectiveSpec ObjectiveSpec::parse(const std::string& text) {
    if (text == "trace-norm") return ObjectiveSpec{};
    const std::string prefix = "augmented:";
    if (text.rfind(prefix, 0) == 0) {
        const auto rest = text.substr(prefix.size());
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            ObjectiveSpec spec;
            spec.kind = ObjectiveKind::augmented;
            std::size_t used = 0;
            try {
                spec.alpha_multiple = std::stod(rest.substr(0, colon), &used);
            } catch (const std::exception&) {
                used = 0;
            }
            const std::string scale_name = rest.substr(colon + 1);
            if (used == colon && spec.alpha_multiple > 0.0) {
                if (scale_name == "fro" || scale_name == "frobenius") {
                    spec.scale = Scale::frobenius;
                    return spec;
                }
                if (scale_name == "spec" || scale_name == "spectral") {
                    spec.scale = Scale::spectral;
                    return spec;
                }
            }
        }
    }
    throw std::invalid_argument(
        "bad objective '" + text + "' (want trace-norm or augmented:<multiple>:<fro|spec>)");
}

double ObjectiveSpec::resolve_alpha(const DenseTensor& x0) const {
    if (kind == ObjectiveKind::trace_norm) return 0.0;
    double base;
    if (scale == Scale::frobenius) {
        base = frobenius_norm(x0);
    } else {
        base = 0.0;
        for (index_t mode = 0; mode < x0.order(); ++mode)
            base = std::max(base, spectral_norm(unfold(x0, mode)));
    }
    return alpha_multiple * base;
}

Objective ObjectiveSpec::resolve(const DenseTensor& x0) const {
    if (kind == ObjectiveKind::trace_norm) return Objective::trace_norm();
    return Objective::augmented(resolve_alpha(x0));
}

namespace {

std::vector<index_t> parse_int_list(const std::string& value, int line) {
    std::istringstream in(value);
    std::vector<index_t> out;
    index_t v;
    while (in >> v) out.push_back(v);
    std::string junk;
    if (in.bad() || (in.clear(), in >> junk))
        throw ConfigError(line, "expected a list of integers, got '" + value + "'");
    if (out.empty()) throw ConfigError(line, "empty integer list");
    return out;
}

double parse_double(const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used]))) ++used;
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + value + "'");
    }
}

index_t parse_int(const std::string& value, int line) {
    const double v = parse_double(value, line);
    const auto i = static_cast<index_t>(v);
    if (static_cast<double>(i) != v) throw ConfigError(line, "expected an integer, got '" + value + "'");
    return i;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    bool saw_shape = false, saw_ranks = false, saw_p = false, saw_m = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");

        if (key == "shape") {
            try {
                cfg.shape = Shape(parse_int_list(value, line_no));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(line_no, e.what());
            }
            saw_shape = true;
        } else if (key == "ranks") {
            cfg.ranks = RankTuple(parse_int_list(value, line_no));
            saw_ranks = true;
        } else if (key == "operator") {
            if (value == "mask") cfg.op_kind = ExperimentConfig::OpKind::mask;
            else if (value == "gaussian") cfg.op_kind = ExperimentConfig::OpKind::gaussian;
            else throw ConfigError(line_no, "operator must be mask or gaussian");
        } else if (key == "p") {
            cfg.p = parse_double(value, line_no);
            if (!(cfg.p > 0.0) || cfg.p > 1.0) throw ConfigError(line_no, "p must be in (0, 1]");
            saw_p = true;
        } else if (key == "m") {
            cfg.m = parse_int(value, line_no);
            if (cfg.m < 1) throw ConfigError(line_no, "m must be >= 1");
            saw_m = true;
        } else if (key == "objective") {
            try {
                cfg.objectives.push_back(ObjectiveSpec::parse(value));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(line_no, e.what());
            }
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, line_no));
        } else if (key == "trials") {
            cfg.trials = static_cast<int>(parse_int(value, line_no));
            if (cfg.trials < 1) throw ConfigError(line_no, "trials must be >= 1");
        } else if (key == "max_iters") {
            cfg.solver.max_iters = static_cast<int>(parse_int(value, line_no));
        } else if (key == "tol_rel_change") {
            cfg.solver.tol_rel_change = parse_double(value, line_no);
        } else if (key == "tol_feas") {
            cfg.solver.tol_feas = parse_double(value, line_no);
        } else if (key == "rho") {
            cfg.solver.penalty = parse_double(value, line_no);
        } else {
            throw ConfigError(line_no, "unknown key '" + key + "'");
        }
    }

    if (!saw_shape) throw ConfigError(line_no, "missing required key 'shape'");
    if (!saw_ranks) throw ConfigError(line_no, "missing required key 'ranks'");
    if (cfg.objectives.empty()) throw ConfigError(line_no, "at least one objective required");
    if (!cfg.ranks.fits(cfg.shape)) throw ConfigError(line_no, "ranks do not fit shape");
    for (index_t rn : cfg.ranks.ranks)
        if (rn < 1) throw ConfigError(line_no, "ranks must be >= 1");
    if (cfg.op_kind == ExperimentConfig::OpKind::mask && !saw_p)
        throw ConfigError(line_no, "mask operator requires 'p'");
    if (cfg.op_kind == ExperimentConfig::OpKind::gaussian && !saw_m)
        throw ConfigError(line_no, "gaussian operator requires 'm'");
    return cfg;
}

namespace {

struct TrialResult {
    // One CSV fragment per objective, plus the final relative errors.
    std::string rows;
    std::vector<double> final_errors;
};

std::string csv_field(double v) { return format_double(v); }

TrialResult run_trial(const ExperimentConfig& cfg, int trial) {
    // Disjoint substreams: 2*trial feeds the ground truth, 2*trial+1 the operator.
    Rng rng = Rng::stream(cfg.seed, 2 * static_cast<std::uint64_t>(trial));
    const DenseTensor x0 = random_low_rank(cfg.shape, cfg.ranks, rng);

    SolverConfig solver_cfg = cfg.solver;
    solver_cfg.record_history = true;
    solver_cfg.reference_solution = x0;

    TrialResult result;
    for (const ObjectiveSpec& spec : cfg.objectives) {
        const Objective obj = spec.resolve(x0);
        SolverReport report;
        // Every objective sees the same operator: its stream is forked so the
        // objective list does not perturb the sampling.
        Rng op_rng = Rng::stream(cfg.seed, 2 * static_cast<std::uint64_t>(trial) + 1);
        if (cfg.op_kind == ExperimentConfig::OpKind::mask) {
            const SensingOperator op = random_mask(cfg.shape, cfg.p, op_rng);
            report = solve_completion(x0, op, obj, solver_cfg);
        } else {
            const SensingOperator op = gaussian_operator(cfg.shape, cfg.m, op_rng);
            report = solve_equality(op, apply(op, x0), obj, solver_cfg);
        }

        const std::string alpha_field =
            spec.kind == ObjectiveKind::augmented ? csv_field(spec.resolve_alpha(x0)) : "";
        for (const HistoryEntry& h : report.history) {
            result.rows += "1,curve," + spec.label() + ',' + alpha_field + ',' +
                           std::to_string(trial) + ',' + std::to_string(h.iteration) + ',' +
                           csv_field(h.objective) + ',' + csv_field(h.feasibility) + ',' +
                           (h.relative_error ? csv_field(*h.relative_error) : "") + '\n';
        }
        result.final_errors.push_back(report.history.empty()
                                          ? relative_error(report.solution, x0)
                                          : report.history.back().relative_error.value_or(0.0));
    }
    return result;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string run_experiment_csv(const ExperimentConfig& cfg) {
    std::vector<std::future<TrialResult>> futures;
    futures.reserve(static_cast<std::size_t>(cfg.trials));
    for (int trial = 0; trial < cfg.trials; ++trial)
        futures.push_back(std::async(std::launch::async, run_trial, std::cref(cfg), trial));

    std::string csv =
        "schema,kind,objective,alpha,trial,iteration,objective_value,feasibility,relative_error\n";
    std::vector<std::vector<double>> errors_by_objective(cfg.objectives.size());
    for (auto& fut : futures) {
        const TrialResult r = fut.get();
        csv += r.rows;
        for (std::size_t i = 0; i < cfg.objectives.size(); ++i)
            errors_by_objective[i].push_back(r.final_errors[i]);
    }
    for (std::size_t i = 0; i < cfg.objectives.size(); ++i) {
        const auto& errs = errors_by_objective[i];
        const double mean =
            std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
        csv += "1,aggregate-mean," + cfg.objectives[i].label() + ",,,,,," + csv_field(mean) + '\n';
        csv += "1,aggregate-median," + cfg.objectives[i].label() + ",,,,,," +
               csv_field(median(errs)) + '\n';
    }
    return csv;
}

std::string solver_runs_csv(
    const std::vector<std::pair<ObjectiveSpec, SolverReport>>& runs,
    const std::vector<double>& alphas) {
    std::string csv = "schema,objective,alpha,iteration,objective_value,feasibility,relative_error\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& [spec, report] = runs[i];
        const std::string alpha_field =
            spec.kind == ObjectiveKind::augmented ? csv_field(alphas[i]) : "";
        for (const HistoryEntry& h : report.history) {
            csv += "1," + spec.label() + ',' + alpha_field + ',' + std::to_string(h.iteration) +
                   ',' + csv_field(h.objective) + ',' + csv_field(h.feasibility) + ',' +
                   (h.relative_error ? csv_field(*h.relative_error) : "") + '\n';
        }
    }
    return csv;
}

}  // namespace lrtr
