#pragma once

#include <stdexcept>
#include <string>

namespace faultmaint {

/// Violated caller contract (e.g. an observation that cannot follow the action taken).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numeric check failed: stochasticity drift, singular solve, and so on.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Value iteration hit its sweep cap before reaching the stopping threshold.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int sweeps)
        : std::runtime_error(what), residual_(residual), sweeps_(sweeps) {}

    double residual() const noexcept { return residual_; }
    int sweeps() const noexcept { return sweeps_; }

private:
    double residual_;
    int sweeps_;
};

/// Bad configuration or input file. `where` names the field or line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& message)
        : std::runtime_error(where.empty() ? message : where + ": " + message),
          where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace faultmaint
