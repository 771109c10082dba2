#include "faultmaint/model.hpp"

#include "faultmaint/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faultmaint {

Action action_from_code(int code) {
    if (code < 1 || code > 3) {
        throw std::out_of_range("action code must be 1, 2 or 3, got " + std::to_string(code));
    }
    return static_cast<Action>(code);
}

std::string to_string(Action u) {
    switch (u) {
        case Action::DoNothing: return "do-nothing";
        case Action::Inspect: return "inspect";
        case Action::Repair: return "repair";
    }
    return "invalid";
}

Observation Observation::count(int m) {
    if (m < 0) {
        throw ContractError("observed fault count must be nonnegative");
    }
    Observation o;
    o.count_ = m;
    return o;
}

int Observation::value() const {
    if (!count_) {
        throw ContractError("blank observation has no fault count");
    }
    return *count_;
}

std::string to_string(const Observation& o) {
    return o.is_blank() ? std::string("blank") : std::to_string(o.value());
}

namespace {

void check_cost_table(const std::vector<double>& table, int n, const char* name) {
    if (table.size() != static_cast<std::size_t>(n) + 1) {
        throw std::invalid_argument(std::string(name) + " cost table must have n+1 = " +
                                    std::to_string(n + 1) + " entries, got " +
                                    std::to_string(table.size()));
    }
    for (std::size_t m = 0; m < table.size(); ++m) {
        if (!std::isfinite(table[m]) || table[m] < 0.0) {
            throw std::invalid_argument(std::string(name) + " cost at m=" + std::to_string(m) +
                                        " must be finite and nonnegative");
        }
    }
}

}  // namespace

SystemModel::SystemModel(int n, double p, double beta, std::vector<double> operating_cost,
                         std::vector<double> inspection_cost, std::vector<double> repair_cost)
    : n_(n), p_(p), beta_(beta), operating_(std::move(operating_cost)),
      inspection_(std::move(inspection_cost)), repair_(std::move(repair_cost)) {
    if (n_ < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (!(p_ >= 0.0 && p_ <= 1.0)) {
        throw std::domain_error("p must lie in [0, 1]");
    }
    if (!(beta_ > 0.0 && beta_ < 1.0)) {
        throw std::domain_error("beta must lie in the open interval (0, 1)");
    }
    check_cost_table(operating_, n_, "operating");
    check_cost_table(inspection_, n_, "inspection");
    check_cost_table(repair_, n_, "repair");
    for (int m = 0; m <= n_; ++m) {
        c_max_ = std::max({c_max_, operating_[m], operating_[m] + inspection_[m],
                           operating_[m] + repair_[m]});
    }
}

double SystemModel::step_cost(int m, Action u) const {
    if (m < 0 || m > n_) {
        throw std::out_of_range("fault count " + std::to_string(m) + " outside [0, n]");
    }
    switch (u) {
        case Action::DoNothing: return operating_[m];
        case Action::Inspect: return operating_[m] + inspection_[m];
        case Action::Repair: return operating_[m] + repair_[m];
    }
    throw std::invalid_argument("invalid action");
}

double binom_pdf(int y, int n, double p) {
    if (n < 0 || y < 0 || y > n) {
        throw std::domain_error("binom_pdf: need 0 <= y <= n");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("binom_pdf: p must lie in [0, 1]");
    }
    if (p == 0.0) return y == 0 ? 1.0 : 0.0;
    if (p == 1.0) return y == n ? 1.0 : 0.0;
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(y + 1.0) - std::lgamma(n - y + 1.0);
    return std::exp(log_choose + y * std::log(p) + (n - y) * std::log1p(-p));
}

Eigen::VectorXd phi(int m, const SystemModel& model) {
    const int n = model.n();
    if (m <= 0 || m >= n) {
        throw std::domain_error("phi is defined only for 0 < m < n");
    }
    // Binopdf(., m, 1) is the point mass at m, so the convolution is a shift.
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n + 1);
    for (int y = m; y <= n; ++y) {
        out[y] = binom_pdf(y - m, n - m, model.p());
    }
    return out;
}

TransitionKernel::TransitionKernel(const SystemModel& model, int max_power) {
    const int n = model.n();
    if (max_power < 1) {
        throw std::invalid_argument("kernel power cache must cover at least T^1");
    }
    matrix_ = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int y = 0; y <= n; ++y) {
        matrix_(y, 0) = binom_pdf(y, n, model.p());
    }
    for (int m = 1; m < n; ++m) {
        matrix_.col(m) = phi(m, model);
    }
    matrix_(n, n) = 1.0;

    for (int m = 0; m <= n; ++m) {
        const double sum = matrix_.col(m).sum();
        if (std::abs(sum - 1.0) > kColumnSumTolerance) {
            throw NumericError("transition column " + std::to_string(m) + " sums to " +
                               std::to_string(sum));
        }
    }

    powers_.reserve(static_cast<std::size_t>(max_power) + 1);
    powers_.push_back(Eigen::MatrixXd::Identity(n + 1, n + 1));
    powers_.push_back(matrix_);
    for (int z = 2; z <= max_power; ++z) {
        Eigen::MatrixXd next = matrix_ * powers_.back();
        const Eigen::RowVectorXd sums = next.colwise().sum();
        const double drift = (sums.array() - 1.0).abs().maxCoeff();
        if (drift > kPowerDriftTolerance) {
            throw NumericError("T^" + std::to_string(z) + " drifted from column-stochastic by " +
                               std::to_string(drift));
        }
        powers_.push_back(std::move(next));
    }
}

const Eigen::MatrixXd& TransitionKernel::power(int z) const {
    if (z < 0 || z > max_power()) {
        throw std::out_of_range("kernel power " + std::to_string(z) + " outside cache [0, " +
                                std::to_string(max_power()) + "]");
    }
    return powers_[static_cast<std::size_t>(z)];
}

TransitionKernel build_transition(const SystemModel& model, int max_power) {
    return TransitionKernel(model, max_power);
}

const Eigen::MatrixXd& kernel_power(const TransitionKernel& kernel, int z) {
    return kernel.power(z);
}

}  // namespace faultmaint
