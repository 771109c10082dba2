#include "faultmaint/solver.hpp"

#include "faultmaint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace faultmaint {

InformationState state_update(InformationState state, Action u, const Observation& o) {
    switch (u) {
        case Action::DoNothing:
            if (!o.is_blank()) {
                throw ContractError("do-nothing must be followed by a blank observation");
            }
            return {state.s, state.z + 1};
        case Action::Inspect:
            if (o.is_blank()) {
                throw ContractError("inspect must be followed by a fault-count observation");
            }
            return {o.value(), 0};
        case Action::Repair:
            if (o.is_blank() || o.value() != 0) {
                throw ContractError("repair must be followed by the observation 0");
            }
            return {0, 0};
    }
    throw ContractError("invalid action");
}

namespace {

Eigen::VectorXd cost_vector(const SystemModel& model, Action u) {
    Eigen::VectorXd c(model.n() + 1);
    for (int m = 0; m <= model.n(); ++m) {
        c[m] = model.step_cost(m, u);
    }
    return c;
}

}  // namespace

double expected_cost(const SystemModel& model, const TransitionKernel& kernel, int s, int z,
                     Action u) {
    if (s < 0 || s > model.n()) {
        throw std::out_of_range("s outside [0, n]");
    }
    const Eigen::MatrixXd& power = kernel.power(z);
    return cost_vector(model, u).dot(power.col(s));
}

double truncation_bound(const SystemModel& model, int k) {
    return 2.0 * std::pow(model.beta(), k) * model.c_max() / (1.0 - model.beta());
}

int horizon_from_epsilon(const SystemModel& model, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("epsilon must be positive");
    }
    if (model.c_max() == 0.0) {
        return 1;
    }
    const double beta = model.beta();
    const double ratio = (1.0 - beta) * epsilon / (2.0 * model.c_max());
    const double raw = std::log(ratio) / std::log(beta);
    int k = std::max(1, static_cast<int>(std::ceil(raw)));
    // ceil of a rounded log can land one off; settle on the bound itself.
    while (truncation_bound(model, k) > epsilon) ++k;
    while (k > 1 && truncation_bound(model, k - 1) <= epsilon) --k;
    return k;
}

BellmanOperator::BellmanOperator(const SystemModel& model, const TransitionKernel& kernel, int k)
    : n_(model.n()), k_(k), beta_(model.beta()) {
    if (k < 1) {
        throw std::invalid_argument("truncation horizon k must be at least 1");
    }
    if (kernel.n() != n_) {
        throw std::invalid_argument("kernel size does not match model");
    }
    if (kernel.max_power() < k + 1) {
        throw std::out_of_range("kernel power cache must reach k + 1 = " + std::to_string(k + 1));
    }
    for (Action u : kAllActions) {
        const Eigen::RowVectorXd c = cost_vector(model, u).transpose();
        Eigen::MatrixXd& table = cost_[action_index(u)];
        table.resize(n_ + 1, k_ + 1);
        for (int z = 0; z <= k_; ++z) {
            table.col(z) = (c * kernel.power(z)).transpose();
        }
    }
    inspect_weights_.reserve(static_cast<std::size_t>(k_) + 1);
    for (int z = 0; z <= k_; ++z) {
        inspect_weights_.push_back(kernel.power(z + 1));
    }
}

Eigen::MatrixXd BellmanOperator::apply(const Eigen::MatrixXd& v,
                                       std::array<Eigen::MatrixXd, 3>& q) const {
    const double reset = v(0, 0);
    const Eigen::VectorXd after_inspect = v.col(0);
    for (auto& table : q) table.resize(n_ + 1, k_ + 1);

    for (int z = 0; z <= k_; ++z) {
        const Eigen::VectorXd inspect_next = inspect_weights_[z].transpose() * after_inspect;
        for (int s = 0; s <= n_; ++s) {
            const double idle_next = z < k_ ? v(s, z + 1) : reset;
            q[0](s, z) = cost_[0](s, z) + beta_ * idle_next;
            q[1](s, z) = cost_[1](s, z) + beta_ * inspect_next[s];
            q[2](s, z) = cost_[2](s, z) + beta_ * reset;
        }
    }
    return q[0].cwiseMin(q[1]).cwiseMin(q[2]);
}

int default_sweep_cap(const SystemModel& model, double tol) {
    const double beta = model.beta();
    const double target = tol * (1.0 - beta) / (model.c_max() / (1.0 - beta) + 1.0);
    return static_cast<int>(std::ceil(std::log(target) / std::log(beta))) + 16;
}

ValueTable value_iteration(const SystemModel& model, const TransitionKernel& kernel, int k,
                           const ValueIterationOptions& options) {
    if (!(options.tol > 0.0)) {
        throw std::domain_error("value iteration tolerance must be positive");
    }
    const BellmanOperator bellman(model, kernel, k);
    const double beta = model.beta();
    const double threshold = options.tol * (1.0 - beta) / (2.0 * beta);
    const int cap = options.max_sweeps.value_or(default_sweep_cap(model, options.tol));

    ValueTable table;
    table.k = k;
    table.tol = options.tol;
    table.v = Eigen::MatrixXd::Zero(model.n() + 1, k + 1);

    for (int sweep = 1; sweep <= cap; ++sweep) {
        Eigen::MatrixXd next = bellman.apply(table.v, table.q);
        table.residual = (next - table.v).cwiseAbs().maxCoeff();
        table.residual_history.push_back(table.residual);
        table.v = std::move(next);
        table.sweeps = sweep;
        if (table.residual <= threshold) {
            return table;
        }
    }
    throw ConvergenceError("value iteration did not converge within " + std::to_string(cap) +
                               " sweeps; last residual " + std::to_string(table.residual),
                           table.residual, table.sweeps);
}

Policy::Policy(int n, int k, std::vector<Action> actions, double epsilon_bound)
    : n_(n), k_(k), actions_(std::move(actions)), epsilon_bound_(epsilon_bound) {
    if (n < 1 || k < 0) {
        throw std::invalid_argument("policy grid needs n >= 1 and k >= 0");
    }
    if (actions_.size() != static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(k + 1)) {
        throw std::invalid_argument("policy grid must hold (n+1)(k+1) actions");
    }
}

Policy Policy::constant(int n, int k, Action u) {
    return Policy(n, k, std::vector<Action>(static_cast<std::size_t>(n + 1) * (k + 1), u), 0.0);
}

Action Policy::at(int s, int z) const {
    if (s < 0 || s > n_ || z < 0 || z > k_) {
        throw std::out_of_range("policy lookup (" + std::to_string(s) + ", " + std::to_string(z) +
                                ") outside grid");
    }
    return actions_[static_cast<std::size_t>(s) * (k_ + 1) + z];
}

Action Policy::at_clamped(int s, int z) const {
    return at(s, std::min(z, k_));
}

std::size_t Policy::count(Action u) const {
    return static_cast<std::size_t>(std::count(actions_.begin(), actions_.end(), u));
}

Policy extract_policy(const ValueTable& table, const SystemModel& model) {
    const int n = table.n();
    std::vector<Action> actions;
    actions.reserve(static_cast<std::size_t>(n + 1) * (table.k + 1));
    for (int s = 0; s <= n; ++s) {
        for (int z = 0; z <= table.k; ++z) {
            const double q1 = table.q[0](s, z);
            const double q2 = table.q[1](s, z);
            const double q3 = table.q[2](s, z);
            if (q1 <= q2 && q1 <= q3) {
                actions.push_back(Action::DoNothing);
            } else if (q2 <= q3) {
                actions.push_back(Action::Inspect);
            } else {
                actions.push_back(Action::Repair);
            }
        }
    }
    return Policy(n, table.k, std::move(actions), truncation_bound(model, table.k) + table.tol);
}

}  // namespace faultmaint
