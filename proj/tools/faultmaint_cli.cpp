// faultmaint: solve, simulate, evaluate and render inspect/repair maintenance policies.

#include "faultmaint/commands.hpp"
#include "faultmaint/errors.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    using namespace faultmaint;

    CLI::App app{"Near-optimal inspect/repair policies for systems of identical components"};
    app.require_subcommand(1);

    std::string config_path;
    std::string policy_spec;

    auto* solve_cmd = app.add_subcommand("solve", "Solve the truncated Bellman equation");
    SolveOptions solve_opts;
    std::string out_dir;
    solve_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    auto* eps_opt = solve_cmd->add_option("--epsilon", solve_opts.epsilon, "Target suboptimality")
                        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--k", solve_opts.k, "Truncation horizon")
        ->check(CLI::PositiveNumber)
        ->excludes(eps_opt);
    solve_cmd->add_option("--tol", solve_opts.tol, "Value-iteration tolerance")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--out", out_dir, "Output directory");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy");
    SimulateOptions sim_opts;
    sim_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sim_cmd->add_option("--policy", policy_spec,
                        "Policy CSV, or always-do-nothing / always-inspect / always-repair")
        ->required();
    sim_cmd->add_option("--trajectories", sim_opts.trajectories, "Number of rollouts")
        ->check(CLI::PositiveNumber);
    auto* horizon_opt = sim_cmd->add_option("--horizon", sim_opts.horizon, "Steps per rollout")
                            ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--tail-tol", sim_opts.tail_tol, "Pick the horizon from this tail bound")
        ->check(CLI::PositiveNumber)
        ->excludes(horizon_opt);
    sim_cmd->add_option("--seed", sim_opts.seed, "Base seed");
    sim_cmd->add_option("--threads", sim_opts.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    sim_cmd->add_option("--out", out_dir, "Output directory");

    auto* eval_cmd = app.add_subcommand("evaluate", "Exact evaluation of a policy");
    eval_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    eval_cmd->add_option("--policy", policy_spec, "Policy CSV or builtin name")->required();

    auto* render_cmd = app.add_subcommand("render", "Render a policy grid as an SVG heatmap");
    std::string out_file;
    render_cmd->add_option("--policy", policy_spec, "Policy CSV")->required();
    render_cmd->add_option("--out", out_file, "Output SVG file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            solve_opts.out_dir = out_dir;
            return cmd_solve(load_config(config_path), solve_opts, std::cerr);
        }
        if (*sim_cmd) {
            sim_opts.policy = policy_spec;
            sim_opts.out_dir = out_dir;
            return cmd_simulate(load_config(config_path), sim_opts, std::cerr);
        }
        if (*eval_cmd) {
            return cmd_evaluate(load_config(config_path), policy_spec, std::cout, std::cerr);
        }
        if (*render_cmd) {
            return cmd_render(policy_spec, out_file, std::cerr);
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
