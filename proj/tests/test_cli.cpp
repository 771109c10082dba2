#include "faultmaint/commands.hpp"
#include "faultmaint/config.hpp"
#include "faultmaint/errors.hpp"
#include "faultmaint/policy_io.hpp"
#include "faultmaint/render.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace faultmaint;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("faultmaint_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kMinimal = R"({
  "n": 2, "p": 0.1, "beta": 0.9,
  "costs": {"operating": [0, 1, 2], "inspection": {"intercept": 1, "slope": 0}, "repair": {"intercept": 5, "slope": 0.5}},
  "solver": {"k": 4}
})";

}  // namespace

TEST(Config, BundledExample1) {
    const RunConfig cfg = load_config(test_support::config_path("example1"));
    EXPECT_EQ(cfg.n, 10);
    EXPECT_DOUBLE_EQ(cfg.p, 0.02);
    EXPECT_DOUBLE_EQ(cfg.beta, 0.95);
    ASSERT_TRUE(cfg.k.has_value());
    EXPECT_EQ(*cfg.k, 100);
    EXPECT_FALSE(cfg.epsilon.has_value());
    for (int m = 0; m <= 10; ++m) {
        EXPECT_DOUBLE_EQ(cfg.operating_cost[m], m);
        EXPECT_DOUBLE_EQ(cfg.inspection_cost[m], 1.0);
        EXPECT_DOUBLE_EQ(cfg.repair_cost[m], 60.0);
    }
}

TEST(Config, BundledExample2) {
    const RunConfig cfg = load_config(test_support::config_path("example2"));
    EXPECT_EQ(*cfg.k, 100);
    for (int m = 0; m <= 10; ++m) {
        EXPECT_DOUBLE_EQ(cfg.operating_cost[m], m);
        EXPECT_NEAR(cfg.inspection_cost[m], 0.1 + 0.09 * m, 1e-15);
        EXPECT_NEAR(cfg.repair_cost[m], 30.0 + 3.0 * m, 1e-12);
    }
}

TEST(Config, ExpandsAndValidates) {
    const RunConfig cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.repair_cost, (std::vector<double>{5.0, 5.5, 6.0}));
    EXPECT_EQ(cfg.simulation.trajectories, 10000);
    EXPECT_DOUBLE_EQ(cfg.tol, 1e-6);
    EXPECT_DOUBLE_EQ(cfg.model().c_max(), 8.0);
}

TEST(Config, SchemaViolations) {
    auto expect_error = [](const std::string& text, const std::string& where) {
        try {
            parse_config(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
        }
    };
    std::string both = kMinimal;
    both.replace(both.find("\"k\": 4"), 6, "\"k\": 4, \"epsilon\": 0.1");
    expect_error(both, "solver");
    std::string neither = kMinimal;
    neither.replace(neither.find("\"k\": 4"), 6, "\"tol\": 1e-6");
    expect_error(neither, "solver");
    std::string unknown = kMinimal;
    unknown.replace(unknown.find("\"n\""), 3, "\"colour\": 1, \"n\"");
    expect_error(unknown, "colour");
    std::string short_table = kMinimal;
    short_table.replace(short_table.find("[0, 1, 2]"), 9, "[0, 1]");
    expect_error(short_table, "costs.operating");
    std::string negative = kMinimal;
    negative.replace(negative.find("[0, 1, 2]"), 9, "[0, -1, 2]");
    expect_error(negative, "costs.operating[1]");
    std::string bad_beta = kMinimal;
    bad_beta.replace(bad_beta.find("0.9"), 3, "1.0");
    expect_error(bad_beta, "beta");
    expect_error("{\n  \"n\": 2,\n  \"p\": ,\n}", "line 3");
}

TEST(Config, ResolvedJsonReparses) {
    const RunConfig cfg = load_config(test_support::config_path("example2"));
    const RunConfig again = parse_config(to_json(cfg).dump());
    EXPECT_EQ(again.repair_cost, cfg.repair_cost);
    EXPECT_EQ(again.inspection_cost, cfg.inspection_cost);
    EXPECT_EQ(again.k, cfg.k);
    EXPECT_EQ(again.simulation.seed, cfg.simulation.seed);
}

TEST(PolicyCsv, RoundTripIsExact) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> value(-1e3, 1e3);
    std::uniform_int_distribution<int> code(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 6;
        const int k = 1 + (trial * 7) % 13;
        ValueTable table;
        table.k = k;
        table.v = Eigen::MatrixXd::NullaryExpr(n + 1, k + 1, [&] { return value(rng); });
        for (auto& q : table.q) q = Eigen::MatrixXd::NullaryExpr(n + 1, k + 1, [&] { return value(rng); });
        std::vector<Action> actions(static_cast<std::size_t>(n + 1) * (k + 1));
        for (auto& a : actions) a = action_from_code(code(rng));
        const Policy policy(n, k, actions, 0.0);

        std::stringstream buf;
        write_policy_csv(buf, policy, table);
        const PolicyGrid back = read_policy_csv(buf);
        EXPECT_EQ(back.grid, to_grid(policy));
        EXPECT_EQ(back.policy(), policy);
        EXPECT_EQ(back.values.v, table.v);
        for (int a = 0; a < 3; ++a) EXPECT_EQ(back.values.q[a], table.q[a]);
    }
}

TEST(PolicyCsv, RejectsMalformed) {
    auto expect_error = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(read_policy_csv(in), ConfigError) << text;
    };
    expect_error("");
    expect_error("s,z,act\n0,0,1\n");
    expect_error("s,z,action,v,v1,v2,v3\n0,0,4,0,0,0,0\n");
    expect_error("s,z,action,v,v1,v2,v3\n0,0,0,0,0,0,0\n");
    expect_error("s,z,action,v,v1,v2,v3\n0,0,1,0,0,0\n");
    expect_error("s,z,action,v,v1,v2,v3\n0,0,1,0,0,0,x\n");
    expect_error("s,z,action,v,v1,v2,v3\n0,1,1,0,0,0,0\n0,0,1,0,0,0,0\n");
    expect_error("s,z,action,v,v1,v2,v3\n0,0,1,0,0,0,0\n1,1,1,0,0,0,0\n");
}

TEST(Render, SingleCellAndLegend) {
    std::istringstream in("s,z,action,v,v1,v2,v3\n0,0,2,1,2,1,3\n");
    const PolicyGrid grid = read_policy_csv(in);
    EXPECT_EQ(grid.grid.rows, 1);
    EXPECT_THROW((void)grid.policy(), ConfigError);
    const std::string svg = render_svg(grid.grid);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("fill=\"#8c8c8c\""), std::string::npos);
    EXPECT_NE(svg.find("do-nothing"), std::string::npos);
    EXPECT_NE(svg.find("repair"), std::string::npos);
}

TEST(Render, ThreeFillsForExampleGrid) {
    const Solution solution = solve(load_config(test_support::config_path("example1")));
    const std::string svg = render_svg(to_grid(solution.policy));
    for (const char* fill : {"#000000", "#8c8c8c", "#ffffff"}) {
        EXPECT_NE(svg.find(std::string("fill=\"") + fill + "\"/>"), std::string::npos) << fill;
    }
    ActionGrid broken{2, 2, {Action::DoNothing}};
    EXPECT_THROW(render_svg(broken), ConfigError);
}

TEST(Commands, SolveWritesArtifacts) {
    const fs::path dir = scratch_dir("solve");
    std::ostringstream log;
    SolveOptions opts;
    opts.out_dir = dir;
    ASSERT_EQ(cmd_solve(load_config(test_support::config_path("example1")), opts, log), 0);
    for (const char* file : {"policy.csv", "values.csv", "solve.json", "policy.svg"}) {
        EXPECT_TRUE(fs::exists(dir / file)) << file;
    }
    const auto summary = nlohmann::json::parse(read_file(dir / "solve.json"));
    EXPECT_EQ(summary["k"], 100);
    EXPECT_EQ(summary["config"]["costs"]["repair"][3], 60.0);
    EXPECT_NE(log.str().find("epsilon_bound"), std::string::npos);

    const PolicyGrid grid = read_policy_csv(dir / "policy.csv");
    EXPECT_EQ(grid.grid.rows, 11);
    EXPECT_EQ(grid.grid.cols, 101);
}

TEST(Commands, SolveWithEpsilonOverride) {
    const fs::path dir = scratch_dir("solve_eps");
    std::ostringstream log;
    SolveOptions opts;
    opts.out_dir = dir;
    opts.epsilon = 1.0;
    ASSERT_EQ(cmd_solve(load_config(test_support::config_path("example1")), opts, log), 0);
    const auto summary = nlohmann::json::parse(read_file(dir / "solve.json"));
    const SystemModel model = test_support::example1_model();
    EXPECT_EQ(summary["k"], horizon_from_epsilon(model, 1.0));
    EXPECT_LE(summary["truncation_bound"].get<double>(), 1.0);

    opts.k = 5;
    EXPECT_THROW(cmd_solve(load_config(test_support::config_path("example1")), opts, log), ConfigError);
}

TEST(Commands, ZeroCostSolveIsAllDoNothing) {
    RunConfig cfg = parse_config(kMinimal);
    cfg.operating_cost.assign(3, 0.0);
    cfg.inspection_cost.assign(3, 0.0);
    cfg.repair_cost.assign(3, 0.0);
    const Solution solution = solve(cfg);
    EXPECT_EQ(solution.policy.count(Action::DoNothing), solution.policy.actions().size());
}

TEST(Commands, Example2InspectsLess) {
    const Solution ex1 = solve(load_config(test_support::config_path("example1")));
    const Solution ex2 = solve(load_config(test_support::config_path("example2")));
    EXPECT_LT(ex2.policy.count(Action::Inspect), ex1.policy.count(Action::Inspect));
}

TEST(Commands, SimulateAndEvaluate) {
    const fs::path dir = scratch_dir("simulate");
    std::ostringstream log;
    RunConfig cfg = load_config(test_support::config_path("example1"));
    SolveOptions solve_opts;
    solve_opts.out_dir = dir;
    ASSERT_EQ(cmd_solve(cfg, solve_opts, log), 0);

    SimulateOptions sim;
    sim.policy = (dir / "policy.csv").string();
    sim.trajectories = 2000;
    sim.out_dir = dir;
    EXPECT_EQ(cmd_simulate(cfg, sim, log), 0);
    const auto report = nlohmann::json::parse(read_file(dir / "report.json"));
    EXPECT_TRUE(report["consistency"]["within_bound"].get<bool>());
    EXPECT_EQ(report["config"]["n"], 10);
    EXPECT_EQ(report["simulation"]["trajectories"], 2000);

    sim.policy = "always-repair";
    EXPECT_EQ(cmd_simulate(cfg, sim, log), 0);
    const auto repair = nlohmann::json::parse(read_file(dir / "report.json"));
    EXPECT_NEAR(repair["simulation"]["mean_discounted_cost"].get<double>(), 1200.0,
                repair["simulation"]["tail_bound"].get<double>());

    std::ostringstream out;
    EXPECT_EQ(cmd_evaluate(cfg, (dir / "policy.csv").string(), out, log), 0);
    EXPECT_TRUE(nlohmann::json::parse(out.str())["consistent"].get<bool>());

    sim.policy = (dir / "missing.csv").string();
    EXPECT_THROW(cmd_simulate(cfg, sim, log), ConfigError);
    sim.policy = "always-repair";
    sim.trajectories = 0;
    EXPECT_THROW(cmd_simulate(cfg, sim, log), ConfigError);
}

TEST(Commands, RenderFromFile) {
    const fs::path dir = scratch_dir("render");
    std::ofstream(dir / "bad.csv") << "s,z,action,v,v1,v2,v3\n0,0,7,0,0,0,0\n";
    std::ostringstream log;
    EXPECT_THROW(cmd_render(dir / "bad.csv", dir / "bad.svg", log), ConfigError);
    std::ofstream(dir / "one.csv") << "s,z,action,v,v1,v2,v3\n0,0,1,0,0,0,0\n";
    EXPECT_EQ(cmd_render(dir / "one.csv", dir / "one.svg", log), 0);
    EXPECT_NE(read_file(dir / "one.svg").find("</svg>"), std::string::npos);
}

TEST(Commands, MonotonicityCounting) {
    const Policy p(1, 3,
                   {Action::DoNothing, Action::Inspect, Action::DoNothing, Action::Repair,
                    Action::DoNothing, Action::DoNothing, Action::Repair, Action::DoNothing},
                   0.0);
    const TransitionKernel kernel = build_transition(test_support::linear_model(1, 0.5, 0.9), 4);
    const MonotonicityReport r = monotonicity_violations(p, kernel);
    EXPECT_EQ(r.pairs, 6U);
    EXPECT_EQ(r.violations, 2U);
    EXPECT_EQ(r.at_boundary, 1U);
}
