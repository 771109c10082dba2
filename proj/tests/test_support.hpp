#pragma once

#include "faultmaint/model.hpp"
#include "faultmaint/sim.hpp"

#include "oracle.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace test_support {

inline std::vector<double> affine(int n, double intercept, double slope) {
    std::vector<double> t;
    for (int m = 0; m <= n; ++m) t.push_back(intercept + slope * m);
    return t;
}

// Example 1: constant inspection and repair prices.
inline faultmaint::SystemModel example1_model() {
    return {10, 0.02, 0.95, affine(10, 0.0, 1.0), affine(10, 1.0, 0.0), affine(10, 60.0, 0.0)};
}

// Example 2: prices grow with the fault count.
inline faultmaint::SystemModel example2_model() {
    return {10, 0.02, 0.95, affine(10, 0.0, 1.0), affine(10, 0.1, 0.09), affine(10, 30.0, 3.0)};
}

/// operating = m, inspection = 1, repair = 5.
inline faultmaint::SystemModel linear_model(int n, double p, double beta) {
    return {n, p, beta, affine(n, 0.0, 1.0), affine(n, 1.0, 0.0), affine(n, 5.0, 0.0)};
}

inline faultmaint::SystemModel zero_cost_model(int n, double p, double beta) {
    const std::vector<double> zero(static_cast<std::size_t>(n) + 1, 0.0);
    return {n, p, beta, zero, zero, zero};
}

/// Total-variation distance between column m of T and the empirical next-count
/// distribution of `draws` independent component-level steps from m faults.
inline double empirical_tv_distance(const faultmaint::SystemModel& model, const Eigen::MatrixXd& t,
                                    int m, int draws, std::uint64_t seed) {
    using namespace faultmaint;
    const int n = model.n();
    ComponentBits start(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < m; ++i) start[i] = 1;
    std::vector<double> hist(static_cast<std::size_t>(n) + 1, 0.0);
    RandomStream rng(stream_seed(seed, static_cast<std::uint64_t>(m)));
    for (int d = 0; d < draws; ++d) {
        hist[fault_count(step_components(start, Action::DoNothing, model.p(), rng))] += 1.0;
    }
    double tv = 0.0;
    for (int y = 0; y <= n; ++y) tv += std::abs(hist[y] / draws - t(y, m));
    return 0.5 * tv;
}

/// Random small problem: costs uniform in [0, 10), p in [0, 1), beta in [0.3, 0.97).
inline oracle::Problem random_problem(std::mt19937_64& rng, int n, int k) {
    std::uniform_real_distribution<double> cost(0.0, 10.0);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    std::uniform_real_distribution<double> disc(0.3, 0.97);
    oracle::Problem pr{n, k, prob(rng), disc(rng), {}, {}, {}};
    for (int m = 0; m <= n; ++m) {
        pr.operating.push_back(cost(rng));
        pr.inspection.push_back(cost(rng));
        pr.repair.push_back(cost(rng));
    }
    return pr;
}

inline faultmaint::SystemModel to_model(const oracle::Problem& pr) {
    return {pr.n, pr.p, pr.beta, pr.operating, pr.inspection, pr.repair};
}

inline std::string config_path(const std::string& name) {
    return std::string(FAULTMAINT_CONFIG_DIR) + "/" + name + ".json";
}

}  // namespace test_support
