#include "faultmaint/commands.hpp"

#include "faultmaint/errors.hpp"
#include "faultmaint/render.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string_view>

namespace faultmaint {

using nlohmann::json;

LogLevel log_level_from_env() {
    const char* raw = std::getenv("FAULTMAINT_LOG");
    if (raw == nullptr) return LogLevel::Info;
    const std::string_view level(raw);
    if (level == "quiet" || level == "0") return LogLevel::Quiet;
    if (level == "debug" || level == "2") return LogLevel::Debug;
    return LogLevel::Info;
}

namespace {

class Logger {
public:
    explicit Logger(std::ostream& out) : out_(out), level_(log_level_from_env()) {}

    std::ostream& info() { return level_ >= LogLevel::Info ? out_ : null_; }
    std::ostream& debug() { return level_ >= LogLevel::Debug ? out_ : null_; }

private:
    std::ostream& out_;
    LogLevel level_;
    std::ofstream null_;  // never opened; writes are discarded
};

int resolve_k(const RunConfig& config, const SystemModel& model) {
    if (config.k) return *config.k;
    if (config.epsilon) return horizon_from_epsilon(model, *config.epsilon);
    throw ConfigError("solver", "exactly one of k and epsilon is required");
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError(path.string(), "cannot open for writing");
    out << doc.dump(2) << '\n';
}

std::filesystem::path resolve_out_dir(const std::filesystem::path& requested,
                                      const RunConfig& config) {
    std::filesystem::path dir = requested;
    if (dir.empty() && config.output_dir) dir = *config.output_dir;
    if (dir.empty()) throw ConfigError("--out", "an output directory is required");
    std::filesystem::create_directories(dir);
    return dir;
}

struct ResolvedPolicy {
    Policy policy;
    std::string source;
    bool builtin = false;
    std::optional<double> solved_value;  // V_k(0,0) from the grid file
};

ResolvedPolicy resolve_policy(const RunConfig& config, const SystemModel& model,
                              const std::string& spec) {
    if (auto builtin = builtin_policy(spec, model.n(), resolve_k(config, model))) {
        return {*builtin, spec, true, std::nullopt};
    }
    if (!std::filesystem::exists(spec)) {
        throw ConfigError(spec, "policy file not found");
    }
    PolicyGrid grid = read_policy_csv(std::filesystem::path(spec));
    Policy loaded = grid.policy();
    if (loaded.n() != model.n()) {
        throw ConfigError(spec, "policy covers n = " + std::to_string(loaded.n()) +
                                    " but the config has n = " + std::to_string(model.n()));
    }
    const double bound = truncation_bound(model, loaded.k()) + config.tol;
    Policy policy(loaded.n(), loaded.k(),
                  std::vector<Action>(loaded.actions().begin(), loaded.actions().end()), bound);
    return {policy, spec, false, grid.values.v(0, 0)};
}

}  // namespace

Solution solve(const RunConfig& config) {
    SystemModel model = config.model();
    const int k = resolve_k(config, model);
    const TransitionKernel kernel = build_transition(model, k + 1);
    ValueIterationOptions options;
    options.tol = config.tol;
    ValueTable table = value_iteration(model, kernel, k, options);
    Policy policy = extract_policy(table, model);
    return Solution{std::move(model), k, std::move(table), std::move(policy)};
}

MonotonicityReport monotonicity_violations(const Policy& policy, const TransitionKernel& kernel) {
    const std::vector<bool> live = reachable_states(kernel, policy);
    const int width = policy.k() + 1;
    MonotonicityReport report;
    for (int s = 0; s <= policy.n(); ++s) {
        for (int z = 0; z < policy.k(); ++z) {
            ++report.pairs;
            if (policy.at(s, z) != Action::DoNothing && policy.at(s, z + 1) == Action::DoNothing) {
                ++report.violations;
                if (z + 1 == policy.k()) ++report.at_boundary;
                if (live[s * width + z] && live[s * width + z + 1]) ++report.reachable;
            }
        }
    }
    return report;
}

int cmd_solve(RunConfig config, const SolveOptions& options, std::ostream& log_stream) {
    Logger log(log_stream);
    if (options.k && options.epsilon) {
        throw ConfigError("--k/--epsilon", "give at most one of --k and --epsilon");
    }
    if (options.k) {
        config.k = *options.k;
        config.epsilon.reset();
    } else if (options.epsilon) {
        config.epsilon = *options.epsilon;
        config.k.reset();
    }
    if (options.tol) config.tol = *options.tol;
    const auto out_dir = resolve_out_dir(options.out_dir, config);

    const Solution solution = solve(config);
    const Policy& policy = solution.policy;
    log.debug() << "value iteration: " << solution.table.sweeps << " sweeps, residual "
                << solution.table.residual << '\n';

    write_policy_csv(out_dir / "policy.csv", policy, solution.table);
    write_value_csv(out_dir / "values.csv", solution.table);
    write_svg(out_dir / "policy.svg", to_grid(policy));

    const MonotonicityReport mono =
        monotonicity_violations(policy, build_transition(solution.model, solution.k + 1));
    json summary;
    summary["config"] = to_json(config);
    summary["k"] = solution.k;
    summary["c_max"] = solution.model.c_max();
    summary["truncation_bound"] = truncation_bound(solution.model, solution.k);
    summary["tol"] = config.tol;
    summary["epsilon_bound"] = policy.epsilon_bound();
    summary["sweeps"] = solution.table.sweeps;
    summary["residual"] = solution.table.residual;
    summary["value_at_origin"] = solution.table.v(0, 0);
    summary["action_counts"] = {
        {"do-nothing", policy.count(Action::DoNothing)},
        {"inspect", policy.count(Action::Inspect)},
        {"repair", policy.count(Action::Repair)},
    };
    summary["monotonicity"] = {
        {"violations", mono.violations},
        {"at_boundary", mono.at_boundary},
        {"reachable", mono.reachable},
        {"pairs", mono.pairs},
        {"fraction", mono.fraction()},
    };
    write_json(out_dir / "solve.json", summary);

    log.info() << "solved k = " << solution.k << " (" << solution.table.sweeps << " sweeps)\n"
               << "V_k(0,0) = " << format_real(solution.table.v(0, 0)) << '\n'
               << "epsilon_bound = " << format_real(policy.epsilon_bound()) << '\n'
               << "actions: do-nothing " << policy.count(Action::DoNothing) << ", inspect "
               << policy.count(Action::Inspect) << ", repair " << policy.count(Action::Repair)
               << '\n';
    if (mono.violations > 0) {
        log.info() << "note: " << mono.violations << " monotonicity violation(s) in z ("
                   << mono.at_boundary << " at the z = k boundary, " << mono.reachable
                   << " reachable from (0, 0))\n";
    }
    log.info() << "wrote " << (out_dir / "policy.csv").string() << '\n';
    return 0;
}

std::optional<Policy> builtin_policy(const std::string& name, int n, int k) {
    if (name == "always-do-nothing") return Policy::constant(n, k, Action::DoNothing);
    if (name == "always-inspect") return Policy::constant(n, k, Action::Inspect);
    if (name == "always-repair") return Policy::constant(n, k, Action::Repair);
    return std::nullopt;
}

json to_json(const SimulationReport& report) {
    json doc;
    doc["mean_discounted_cost"] = report.mean_discounted_cost;
    doc["sample_std"] = report.sample_std;
    doc["confidence_halfwidth_95"] = report.confidence_halfwidth_95;
    doc["confidence_defined"] = report.confidence_defined;
    doc["trajectories"] = report.trajectories;
    doc["horizon"] = report.horizon;
    doc["tail_bound"] = report.tail_bound;
    doc["base_seed"] = report.base_seed;
    doc["action_frequencies"] = {
        {"do-nothing", report.action_frequencies[0]},
        {"inspect", report.action_frequencies[1]},
        {"repair", report.action_frequencies[2]},
    };
    doc["clamped_lookups"] = report.clamped_lookups;
    return doc;
}

int cmd_simulate(RunConfig config, const SimulateOptions& options, std::ostream& log_stream) {
    Logger log(log_stream);
    if (options.horizon && options.tail_tol) {
        throw ConfigError("--horizon/--tail-tol", "give at most one of --horizon and --tail-tol");
    }
    if (options.trajectories) {
        if (*options.trajectories < 1) throw ConfigError("--trajectories", "must be at least 1");
        config.simulation.trajectories = *options.trajectories;
    }
    if (options.horizon) {
        config.simulation.horizon = *options.horizon;
    } else if (options.tail_tol) {
        config.simulation.horizon.reset();
        config.simulation.tail_tol = *options.tail_tol;
    }
    if (options.seed) config.simulation.seed = *options.seed;
    if (options.threads) config.simulation.threads = *options.threads;
    const auto out_dir = resolve_out_dir(options.out_dir, config);

    const SystemModel model = config.model();
    const ResolvedPolicy resolved = resolve_policy(config, model, options.policy);

    SimulationOptions sim;
    sim.trajectories = config.simulation.trajectories;
    sim.horizon = config.simulation.horizon.value_or(horizon_for_tail(model, config.simulation.tail_tol));
    sim.base_seed = config.simulation.seed;
    sim.threads = config.simulation.threads;
    const SimulationReport report = simulate(model, resolved.policy, sim);

    // Solved grids are compared with their own V_k(0,0); builtins with the exact
    // value on the truncated chain, whose wrap at z = k can differ by the truncation bound.
    double reference = 0.0;
    double model_slack = 0.0;
    std::string reference_kind;
    if (resolved.solved_value) {
        reference = *resolved.solved_value;
        model_slack = resolved.policy.epsilon_bound();
        reference_kind = "solver value V_k(0,0)";
    } else {
        const TransitionKernel kernel = build_transition(model, resolved.policy.k() + 1);
        reference = evaluate_policy_exact(model, kernel, resolved.policy)(0, 0);
        model_slack = truncation_bound(model, resolved.policy.k());
        reference_kind = "exact truncated-chain value V(0,0)";
    }
    const double gap = std::abs(report.mean_discounted_cost - reference);
    const double bound = model_slack + report.tail_bound + report.confidence_halfwidth_95;
    const bool within = gap <= bound;

    json doc;
    doc["config"] = to_json(config);
    doc["policy"] = {
        {"source", resolved.source},
        {"builtin", resolved.builtin},
        {"k", resolved.policy.k()},
        {"epsilon_bound", resolved.policy.epsilon_bound()},
    };
    doc["simulation"] = to_json(report);
    doc["consistency"] = {
        {"reference", reference},
        {"reference_kind", reference_kind},
        {"gap", gap},
        {"model_slack", model_slack},
        {"bound", bound},
        {"within_bound", within},
    };
    doc["z_clamping"] =
        "lookups with elapsed time beyond the policy's k use the z = k column";
    write_json(out_dir / "report.json", doc);

    log.info() << "mean discounted cost = " << format_real(report.mean_discounted_cost)
               << " +/- " << format_real(report.confidence_halfwidth_95) << " (95%, "
               << report.trajectories << " trajectories, horizon " << report.horizon << ")\n"
               << "reference (" << reference_kind << ") = " << format_real(reference) << '\n'
               << "gap = " << format_real(gap) << ", bound = epsilon " << format_real(model_slack)
               << " + tail " << format_real(report.tail_bound) << " + halfwidth "
               << format_real(report.confidence_halfwidth_95) << " = " << format_real(bound)
               << (within ? " [ok]\n" : " [FAILED]\n");
    if (report.clamped_lookups > 0) {
        log.info() << "note: " << report.clamped_lookups << " lookups clamped at z = k\n";
    }
    return within ? 0 : 1;
}

int cmd_evaluate(const RunConfig& config, const std::string& policy_spec, std::ostream& out,
                 std::ostream& log_stream) {
    Logger log(log_stream);
    const SystemModel model = config.model();
    const ResolvedPolicy resolved = resolve_policy(config, model, policy_spec);
    const TransitionKernel kernel = build_transition(model, resolved.policy.k() + 1);
    const Eigen::MatrixXd exact = evaluate_policy_exact(model, kernel, resolved.policy);

    json doc;
    doc["policy"] = resolved.source;
    doc["k"] = resolved.policy.k();
    doc["value_at_origin"] = exact(0, 0);
    bool ok = true;
    if (!resolved.builtin) {
        // Greedy in a table within tol / (2 beta) of the fixed point: the policy's
        // value is within tol / (1 - beta) of optimal, the stored table within tol.
        const PolicyGrid grid = read_policy_csv(std::filesystem::path(policy_spec));
        const double allowed = config.tol / (1.0 - model.beta()) + config.tol;
        const double diff = (exact - grid.values.v).cwiseAbs().maxCoeff();
        ok = diff <= allowed;
        doc["max_abs_diff_vs_file"] = diff;
        doc["allowed_diff"] = allowed;
        doc["consistent"] = ok;
        log.info() << "max |V_exact - V_file| = " << format_real(diff) << " (allowed "
                   << format_real(allowed) << ")" << (ok ? " [ok]\n" : " [FAILED]\n");
    }
    out << doc.dump(2) << '\n';
    return ok ? 0 : 1;
}

int cmd_render(const std::filesystem::path& policy_file, const std::filesystem::path& out_file,
               std::ostream& log_stream) {
    Logger log(log_stream);
    const PolicyGrid grid = read_policy_csv(policy_file);
    if (out_file.has_parent_path()) std::filesystem::create_directories(out_file.parent_path());
    write_svg(out_file, grid.grid);
    log.info() << "wrote " << out_file.string() << " (" << grid.grid.rows << " x " << grid.grid.cols
               << " cells)\n";
    return 0;
}

}  // namespace faultmaint
