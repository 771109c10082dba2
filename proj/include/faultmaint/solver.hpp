#pragma once

// Truncated Bellman equation on the information state (s, z).
//
// s is the last non-blank observed fault count and z the number of steps since
// it was observed. Tracking z only up to a horizon k gives a finite MDP whose
// optimal policy is within 2 beta^k c_max / (1 - beta) of optimal for the
// untruncated problem.

#include "faultmaint/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace faultmaint {

struct InformationState {
    int s = 0;
    int z = 0;

    friend bool operator==(const InformationState&, const InformationState&) = default;
};

/// (s, z) after taking u and seeing o. Unclamped: z may exceed any horizon.
/// Throws ContractError when o cannot follow u (Blank iff DoNothing, 0 after Repair).
InformationState state_update(InformationState state, Action u, const Observation& o);

/// E[c(m_t, u) | s, z] = sum_m c(m, u) T^z(m, s).
double expected_cost(const SystemModel& model, const TransitionKernel& kernel, int s, int z,
                     Action u);

/// 2 beta^k c_max / (1 - beta).
double truncation_bound(const SystemModel& model, int k);

/// Smallest k >= 1 with truncation_bound(model, k) <= epsilon.
int horizon_from_epsilon(const SystemModel& model, double epsilon);

struct ValueTable {
    int k = 0;
    Eigen::MatrixXd v;                 // (n+1) x (k+1)
    std::array<Eigen::MatrixXd, 3> q;  // per action, indexed by action_index
    double residual = 0.0;             // sup-norm change of the last sweep
    int sweeps = 0;
    std::vector<double> residual_history;
    double tol = 0.0;

    int n() const noexcept { return static_cast<int>(v.rows()) - 1; }
    double action_value(int s, int z, Action u) const { return q[action_index(u)](s, z); }
};

/// Precomputed one-sweep Bellman operator for a fixed (model, k).
///
/// Sweeps are Jacobi-style: the new table depends only on the previous one.
class BellmanOperator {
public:
    /// Requires the kernel to cache powers up to k + 1.
    BellmanOperator(const SystemModel& model, const TransitionKernel& kernel, int k);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double expected_cost(int s, int z, Action u) const { return cost_[action_index(u)](s, z); }

    /// Fills q with the three action values under continuation v and returns min_u q.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& v, std::array<Eigen::MatrixXd, 3>& q) const;

private:
    int n_;
    int k_;
    double beta_;
    std::array<Eigen::MatrixXd, 3> cost_;
    // inspect_weights_[z](m, s) = T^{1+z}(m, s)
    std::vector<Eigen::MatrixXd> inspect_weights_;
};

struct ValueIterationOptions {
    double tol = 1e-6;
    /// Defaults to a cap derived from the contraction factor.
    std::optional<int> max_sweeps;
};

/// Sweep cap used when none is configured.
int default_sweep_cap(const SystemModel& model, double tol);

/// Value iteration from the zero table until the sup-norm change is at most
/// tol (1 - beta) / (2 beta), so the result is within tol of the fixed point.
/// Throws ConvergenceError past the sweep cap.
ValueTable value_iteration(const SystemModel& model, const TransitionKernel& kernel, int k,
                           const ValueIterationOptions& options = {});

class Policy {
public:
    Policy() = default;
    Policy(int n, int k, std::vector<Action> actions, double epsilon_bound);

    /// Same action at every state.
    static Policy constant(int n, int k, Action u);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double epsilon_bound() const noexcept { return epsilon_bound_; }
    std::span<const Action> actions() const noexcept { return actions_; }

    Action at(int s, int z) const;
    /// Lookup with z clamped to k, for executing on the untruncated system.
    Action at_clamped(int s, int z) const;

    std::size_t count(Action u) const;

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<Action> actions_;
    double epsilon_bound_ = 0.0;
};

/// argmin_u q(s, z, u), ties to the smaller action code. The bound is the
/// truncation bound plus the value-iteration tolerance.
Policy extract_policy(const ValueTable& table, const SystemModel& model);

}  // namespace faultmaint
