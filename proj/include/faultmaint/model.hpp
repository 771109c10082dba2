#pragma once

// Problem data for a system of n identical components that fail independently.
//
// The aggregate state is the fault count m in {0..n}. Under DoNothing and
// Inspect, each working component fails with probability p per step and faults
// are absorbing; Repair resets every component to operating.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace faultmaint {

enum class Action : std::uint8_t {
    DoNothing = 1,
    Inspect = 2,
    Repair = 3,
};

inline constexpr Action kAllActions[] = {Action::DoNothing, Action::Inspect, Action::Repair};

/// 1-based action code, as written to policy files.
constexpr int action_code(Action u) noexcept { return static_cast<int>(u); }
/// 0-based slot for per-action arrays.
constexpr int action_index(Action u) noexcept { return static_cast<int>(u) - 1; }
Action action_from_code(int code);
std::string to_string(Action u);

/// Either a fault count or Blank (nothing learned this step).
class Observation {
public:
    static Observation blank() noexcept { return Observation{}; }
    static Observation count(int m);

    bool is_blank() const noexcept { return !count_.has_value(); }
    /// Throws ContractError on a blank observation.
    int value() const;

    friend bool operator==(const Observation&, const Observation&) = default;

private:
    Observation() = default;
    std::optional<int> count_;
};

std::string to_string(const Observation& o);

/// Per-fault-count cost tables plus dynamics parameters.
///
/// Per-step cost is operating(m) for DoNothing, operating(m) + inspection(m)
/// for Inspect and operating(m) + repair(m) for Repair.
class SystemModel {
public:
    SystemModel(int n, double p, double beta, std::vector<double> operating_cost,
                std::vector<double> inspection_cost, std::vector<double> repair_cost);

    int n() const noexcept { return n_; }
    double p() const noexcept { return p_; }
    double beta() const noexcept { return beta_; }
    std::span<const double> operating_cost() const noexcept { return operating_; }
    std::span<const double> inspection_cost() const noexcept { return inspection_; }
    std::span<const double> repair_cost() const noexcept { return repair_; }
    /// max over m and u of step_cost(m, u).
    double c_max() const noexcept { return c_max_; }

    /// c(m, u). Throws std::out_of_range for m outside [0, n].
    double step_cost(int m, Action u) const;

private:
    int n_;
    double p_;
    double beta_;
    std::vector<double> operating_;
    std::vector<double> inspection_;
    std::vector<double> repair_;
    double c_max_ = 0.0;
};

/// C(n,y) p^y (1-p)^(n-y), evaluated in the log domain. Exact at p = 0 and p = 1.
double binom_pdf(int y, int n, double p);

/// Distribution of the next fault count from 0 < m < n faults:
/// point mass at m convolved with Binomial(n - m, p). Indexed by count value.
Eigen::VectorXd phi(int m, const SystemModel& model);

/// One-step fault-count transition matrix under DoNothing/Inspect, with
/// cached powers T^0..T^max_power.
///
/// Entry (m', m) is P(m_{t+1} = m' | m_t = m), so columns are distributions.
/// Repair is not represented here: it sends every count to 0.
class TransitionKernel {
public:
    TransitionKernel(const SystemModel& model, int max_power);

    int n() const noexcept { return static_cast<int>(matrix_.rows()) - 1; }
    int max_power() const noexcept { return static_cast<int>(powers_.size()) - 1; }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

    /// T^z; throws std::out_of_range past the cache.
    const Eigen::MatrixXd& power(int z) const;

private:
    Eigen::MatrixXd matrix_;
    std::vector<Eigen::MatrixXd> powers_;
};

/// Tolerances used when checking the kernel and its cached powers.
inline constexpr double kColumnSumTolerance = 1e-12;
inline constexpr double kPowerDriftTolerance = 1e-9;

/// Kernel with powers cached up to max_power (at least 1).
TransitionKernel build_transition(const SystemModel& model, int max_power = 1);

/// Same as kernel.power(z).
const Eigen::MatrixXd& kernel_power(const TransitionKernel& kernel, int z);

}  // namespace faultmaint
