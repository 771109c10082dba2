#pragma once

// Implementation of the command-line subcommands. Each command returns the
// process exit status and writes human-readable progress to `log`.

#include "faultmaint/config.hpp"
#include "faultmaint/policy_io.hpp"
#include "faultmaint/sim.hpp"
#include "faultmaint/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace faultmaint {

enum class LogLevel { Quiet, Info, Debug };

/// Reads FAULTMAINT_LOG (quiet, info, debug); defaults to info.
LogLevel log_level_from_env();

struct Solution {
    SystemModel model;
    int k;
    ValueTable table;
    Policy policy;
};

/// k from the config (explicit, or from epsilon), then value iteration and extraction.
Solution solve(const RunConfig& config);

/// Count of adjacent (z, z+1) pairs at equal s where a non-DoNothing action is
/// followed by DoNothing.
struct MonotonicityReport {
    std::size_t violations = 0;
    std::size_t pairs = 0;
    /// Violations that land on the z = k column.
    std::size_t at_boundary = 0;
    /// Violations whose two states are both reachable from (0, 0).
    std::size_t reachable = 0;
    double fraction() const { return pairs == 0 ? 0.0 : static_cast<double>(violations) / pairs; }
};
MonotonicityReport monotonicity_violations(const Policy& policy, const TransitionKernel& kernel);

struct SolveOptions {
    std::optional<double> epsilon;
    std::optional<int> k;
    std::optional<double> tol;
    std::filesystem::path out_dir;
};

/// Writes policy.csv, values.csv, solve.json and policy.svg to out_dir.
int cmd_solve(RunConfig config, const SolveOptions& options, std::ostream& log);

struct SimulateOptions {
    /// Path to a policy CSV, or one of always-do-nothing / always-inspect / always-repair.
    std::string policy;
    std::optional<std::int64_t> trajectories;
    std::optional<int> horizon;
    std::optional<double> tail_tol;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::filesystem::path out_dir;
};

/// Builtin constant policy by name, sized to n and k.
std::optional<Policy> builtin_policy(const std::string& name, int n, int k);

/// Writes report.json to out_dir. Nonzero when the solver-consistency check fails.
int cmd_simulate(RunConfig config, const SimulateOptions& options, std::ostream& log);

/// Exact evaluation of a policy file (or builtin); prints JSON to `out`.
int cmd_evaluate(const RunConfig& config, const std::string& policy, std::ostream& out,
                 std::ostream& log);

int cmd_render(const std::filesystem::path& policy_file, const std::filesystem::path& out_file,
               std::ostream& log);

nlohmann::json to_json(const SimulationReport& report);

}  // namespace faultmaint
