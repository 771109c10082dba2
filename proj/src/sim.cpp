#include "faultmaint/sim.hpp"

#include "faultmaint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace faultmaint {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t index) {
    return splitmix64(splitmix64(base_seed) + index);
}

ComponentBits step_components(const ComponentBits& bits, Action u, double p, RandomStream& rng) {
    ComponentBits next(bits.size(), 0);
    if (u == Action::Repair) {
        return next;
    }
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) {
            next[i] = 1;
        } else {
            next[i] = rng.uniform() < p ? 1 : 0;
        }
    }
    return next;
}

int fault_count(const ComponentBits& bits) {
    return static_cast<int>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

Observation observe(int m_next, Action u) {
    switch (u) {
        case Action::DoNothing: return Observation::blank();
        case Action::Inspect: return Observation::count(m_next);
        case Action::Repair: return Observation::count(0);
    }
    throw ContractError("invalid action");
}

RolloutResult rollout(const SystemModel& model, const Policy& policy, int horizon,
                      std::uint64_t seed, ComponentTrajectory* record) {
    if (policy.n() != model.n()) {
        throw std::invalid_argument("policy grid size does not match model");
    }
    if (horizon < 0) {
        throw std::invalid_argument("horizon must be nonnegative");
    }
    RandomStream rng(seed);
    ComponentBits bits(static_cast<std::size_t>(model.n()), 0);
    int m = 0;
    InformationState info{0, 0};
    RolloutResult result;
    double discount = 1.0;

    if (record != nullptr) {
        *record = ComponentTrajectory{};
        record->states.push_back(bits);
        record->counts.push_back(m);
        record->observations.push_back(Observation::count(0));
        record->info.push_back(info);
    }

    for (int t = 1; t <= horizon; ++t) {
        if (info.z > policy.k()) ++result.clamped_lookups;
        const Action u = policy.at_clamped(info.s, info.z);
        ++result.action_counts[action_index(u)];
        result.discounted_cost += discount * model.step_cost(m, u);
        discount *= model.beta();

        bits = step_components(bits, u, model.p(), rng);
        m = fault_count(bits);
        const Observation o = observe(m, u);
        info = state_update(info, u, o);

        if (record != nullptr) {
            record->actions.push_back(u);
            record->states.push_back(bits);
            record->counts.push_back(m);
            record->observations.push_back(o);
            record->info.push_back(info);
        }
    }
    return result;
}

double tail_bound(const SystemModel& model, int horizon) {
    return std::pow(model.beta(), horizon) * model.c_max() / (1.0 - model.beta());
}

int horizon_for_tail(const SystemModel& model, double tail_tol) {
    if (!(tail_tol > 0.0)) {
        throw std::domain_error("tail tolerance must be positive");
    }
    if (model.c_max() == 0.0) return 1;
    const double raw =
        std::log(tail_tol * (1.0 - model.beta()) / model.c_max()) / std::log(model.beta());
    int horizon = std::max(1, static_cast<int>(std::ceil(raw)));
    while (tail_bound(model, horizon) > tail_tol) ++horizon;
    while (horizon > 1 && tail_bound(model, horizon - 1) <= tail_tol) --horizon;
    return horizon;
}

SimulationReport simulate(const SystemModel& model, const Policy& policy,
                          const SimulationOptions& options) {
    if (options.trajectories < 1) {
        throw std::invalid_argument("need at least one trajectory");
    }
    if (options.horizon < 1) {
        throw std::invalid_argument("simulation horizon must be at least 1");
    }
    const auto count = static_cast<std::size_t>(options.trajectories);
    std::vector<RolloutResult> results(count);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = rollout(model, policy, options.horizon, stream_seed(options.base_seed, i));
        }
    };

    const std::size_t workers =
        std::clamp<std::size_t>(options.threads == 0 ? 1 : options.threads, 1, count);
    if (workers == 1) {
        run_range(0, count);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin < end) pool.emplace_back(run_range, begin, end);
        }
    }

    SimulationReport report;
    report.trajectories = options.trajectories;
    report.horizon = options.horizon;
    report.tail_bound = tail_bound(model, options.horizon);
    report.base_seed = options.base_seed;

    // Welford accumulation in index order: a constant cost stream gives an exact
    // mean and zero variance.
    double mean = 0.0;
    double squares = 0.0;
    std::array<std::uint64_t, 3> actions{};
    for (std::size_t i = 0; i < count; ++i) {
        const RolloutResult& r = results[i];
        const double delta = r.discounted_cost - mean;
        mean += delta / static_cast<double>(i + 1);
        squares += delta * (r.discounted_cost - mean);
        for (std::size_t a = 0; a < 3; ++a) actions[a] += r.action_counts[a];
        report.clamped_lookups += r.clamped_lookups;
    }
    const double n = static_cast<double>(count);
    report.mean_discounted_cost = mean;
    if (count > 1) {
        report.sample_std = std::sqrt(std::max(0.0, squares) / (n - 1.0));
        report.confidence_halfwidth_95 = 1.96 * report.sample_std / std::sqrt(n);
        report.confidence_defined = true;
    }

    const double steps = n * options.horizon;
    for (std::size_t a = 0; a < 3; ++a) {
        report.action_frequencies[a] = static_cast<double>(actions[a]) / steps;
    }
    return report;
}

Eigen::MatrixXd evaluate_policy_exact(const SystemModel& model, const TransitionKernel& kernel,
                                      const Policy& policy) {
    const int n = model.n();
    const int k = policy.k();
    if (policy.n() != n || kernel.n() != n) {
        throw std::invalid_argument("policy, kernel and model sizes differ");
    }
    if (kernel.max_power() < k + 1) {
        throw std::out_of_range("kernel power cache must reach k + 1");
    }
    const int width = k + 1;
    const int states = (n + 1) * width;
    auto index = [width](int s, int z) { return s * width + z; };

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(states, states);
    Eigen::VectorXd cost(states);
    const double beta = model.beta();

    for (int s = 0; s <= n; ++s) {
        for (int z = 0; z <= k; ++z) {
            const int row = index(s, z);
            const Action u = policy.at(s, z);
            cost[row] = expected_cost(model, kernel, s, z, u);
            switch (u) {
                case Action::DoNothing:
                    system(row, z < k ? index(s, z + 1) : index(0, 0)) -= beta;
                    break;
                case Action::Inspect: {
                    const Eigen::MatrixXd& power = kernel.power(z + 1);
                    for (int m = 0; m <= n; ++m) {
                        system(row, index(m, 0)) -= beta * power(m, s);
                    }
                    break;
                }
                case Action::Repair:
                    system(row, index(0, 0)) -= beta;
                    break;
            }
        }
    }

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const Eigen::VectorXd solution = lu.solve(cost);
    const double residual = (system * solution - cost).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff() / (1.0 - beta));
    if (!solution.allFinite() || residual > 1e-8 * scale) {
        throw NumericError("exact policy evaluation: linear solve failed (residual " +
                           std::to_string(residual) + ")");
    }

    Eigen::MatrixXd values(n + 1, width);
    for (int s = 0; s <= n; ++s) {
        for (int z = 0; z <= k; ++z) {
            values(s, z) = solution[index(s, z)];
        }
    }
    return values;
}

std::vector<bool> reachable_states(const TransitionKernel& kernel, const Policy& policy) {
    const int n = policy.n();
    const int k = policy.k();
    if (kernel.n() != n || kernel.max_power() < k + 1) {
        throw std::invalid_argument("kernel does not cover the policy grid");
    }
    const int width = k + 1;
    std::vector<bool> seen(static_cast<std::size_t>(n + 1) * width, false);
    std::vector<int> frontier{0};
    seen[0] = true;
    auto visit = [&](int s, int z) {
        const int id = s * width + z;
        if (!seen[id]) {
            seen[id] = true;
            frontier.push_back(id);
        }
    };
    while (!frontier.empty()) {
        const int id = frontier.back();
        frontier.pop_back();
        const int s = id / width;
        const int z = id % width;
        switch (policy.at(s, z)) {
            case Action::DoNothing:
                if (z < k) visit(s, z + 1); else visit(0, 0);
                break;
            case Action::Inspect:
                for (int m = 0; m <= n; ++m) {
                    if (kernel.power(z + 1)(m, s) > 0.0) visit(m, 0);
                }
                break;
            case Action::Repair:
                visit(0, 0);
                break;
        }
    }
    return seen;
}

}  // namespace faultmaint
