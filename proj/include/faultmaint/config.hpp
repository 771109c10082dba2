#pragma once

// Run configuration: a JSON document describing one maintenance problem and
// how to solve and simulate it.
//
//   {
//     "n": 10, "p": 0.02, "beta": 0.95,
//     "costs": {
//       "operating":  {"intercept": 0, "slope": 1},
//       "inspection": {"intercept": 1, "slope": 0},
//       "repair":     [60, 60, ...]                  // or an explicit n+1 table
//     },
//     "solver":     {"k": 100, "tol": 1e-6},         // or {"epsilon": 0.1}
//     "simulation": {"trajectories": 10000, "tail_tol": 1e-6, "seed": 1, "threads": 1},
//     "output":     {"dir": "out/example1"}
//   }
//
// "solver" needs exactly one of k / epsilon; "simulation" takes at most one of
// horizon / tail_tol. "simulation" and "output" are optional. Unknown keys are
// rejected.

#include "faultmaint/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace faultmaint {

struct SimulationConfig {
    std::int64_t trajectories = 10000;
    std::optional<int> horizon;
    double tail_tol = 1e-6;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct RunConfig {
    int n = 0;
    double p = 0.0;
    double beta = 0.0;
    std::vector<double> operating_cost;
    std::vector<double> inspection_cost;
    std::vector<double> repair_cost;

    std::optional<int> k;
    std::optional<double> epsilon;
    double tol = 1e-6;

    SimulationConfig simulation;
    std::optional<std::string> output_dir;

    SystemModel model() const;
};

/// Parse and validate; `source` names the input in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Resolved form: cost tables expanded, defaults filled in.
nlohmann::json to_json(const RunConfig& config);

}  // namespace faultmaint
