#pragma once

// Component-level Monte Carlo simulation and exact policy evaluation.

#include "faultmaint/model.hpp"
#include "faultmaint/solver.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace faultmaint {

/// One bit per component: 0 operating, 1 faulty.
using ComponentBits = std::vector<std::uint8_t>;

/// Deterministic uniform stream for one trajectory.
///
/// The engine is mt19937_64 seeded with stream_seed(base_seed, index); uniforms
/// take the top 53 bits of each draw, so results do not depend on the standard
/// library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// splitmix64(splitmix64(base_seed) + index)
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index);

/// Advance every component one step. Under DoNothing/Inspect each working
/// component draws one uniform, in index order, and fails when it is below p.
/// Repair zeroes all bits without drawing.
ComponentBits step_components(const ComponentBits& bits, Action u, double p, RandomStream& rng);

int fault_count(const ComponentBits& bits);

/// Observation produced by taking u and landing on m_next faults.
Observation observe(int m_next, Action u);

struct ComponentTrajectory {
    std::vector<ComponentBits> states;  // x_t for t = 1..horizon+1
    std::vector<int> counts;            // m_t for t = 1..horizon+1
    std::vector<Action> actions;        // u_t for t = 1..horizon
    std::vector<Observation> observations;  // o_t for t = 1..horizon+1; o_1 = 0
    std::vector<InformationState> info;     // (s_t, z_t) for t = 1..horizon+1
};

struct RolloutResult {
    double discounted_cost = 0.0;
    std::array<std::uint64_t, 3> action_counts{};
    /// Steps whose elapsed time exceeded the policy's k, so the lookup was clamped.
    std::uint64_t clamped_lookups = 0;
};

/// Run the policy on the component system from all-operating (s = 0, z = 0)
/// for `horizon` steps. Costs use the true fault count. Lookups clamp z to the
/// policy's k. Optionally records the full trajectory.
RolloutResult rollout(const SystemModel& model, const Policy& policy, int horizon,
                      std::uint64_t seed, ComponentTrajectory* record = nullptr);

/// beta^T c_max / (1 - beta): the most cost a T-step rollout can miss.
double tail_bound(const SystemModel& model, int horizon);

/// Smallest horizon whose tail bound is at most tail_tol.
int horizon_for_tail(const SystemModel& model, double tail_tol);

struct SimulationOptions {
    std::int64_t trajectories = 10000;
    int horizon = 0;
    std::uint64_t base_seed = 1;
    unsigned threads = 1;
};

struct SimulationReport {
    double mean_discounted_cost = 0.0;
    double sample_std = 0.0;
    /// 1.96 s / sqrt(N); 0 and flagged undefined for a single trajectory.
    double confidence_halfwidth_95 = 0.0;
    bool confidence_defined = false;
    std::int64_t trajectories = 0;
    int horizon = 0;
    double tail_bound = 0.0;
    std::uint64_t base_seed = 0;
    std::array<double, 3> action_frequencies{};
    std::uint64_t clamped_lookups = 0;
};

/// Independent rollouts with trajectory i seeded by stream_seed(base_seed, i).
/// Aggregation runs in index order, so the report does not depend on threads.
SimulationReport simulate(const SystemModel& model, const Policy& policy,
                          const SimulationOptions& options);

/// Exact value of a policy on the truncated (s, z) chain, including the wrap to
/// (0, 0) after DoNothing at z = k. Solves (I - beta P) V = c by dense LU.
Eigen::MatrixXd evaluate_policy_exact(const SystemModel& model, const TransitionKernel& kernel,
                                      const Policy& policy);

/// States of the truncated chain reachable from (0, 0) under the policy with
/// positive probability. Row-major over (s, z), like the policy grid.
std::vector<bool> reachable_states(const TransitionKernel& kernel, const Policy& policy);

}  // namespace faultmaint
