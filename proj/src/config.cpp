#include "faultmaint/config.hpp"

#include "faultmaint/errors.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace faultmaint {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& object, const std::string& where,
                    const std::set<std::string>& allowed) {
    if (!object.is_object()) {
        throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
    }
    for (const auto& item : object.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError(join(where, item.key()), "unknown key");
        }
    }
}

const json& require(const json& object, const std::string& where, const std::string& key) {
    if (!object.contains(key)) {
        throw ConfigError(join(where, key), "missing required key");
    }
    return object.at(key);
}

double as_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        throw ConfigError(where, "expected a number");
    }
    return value.get<double>();
}

std::int64_t as_integer(const json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        throw ConfigError(where, "expected an integer");
    }
    return value.get<std::int64_t>();
}

int as_int(const json& value, const std::string& where) {
    const std::int64_t raw = as_integer(value, where);
    if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max()) {
        throw ConfigError(where, "integer out of range");
    }
    return static_cast<int>(raw);
}

std::vector<double> cost_table(const json& spec, const std::string& where, int n) {
    if (spec.is_array()) {
        if (spec.size() != static_cast<std::size_t>(n) + 1) {
            throw ConfigError(where, "cost table must have n+1 = " + std::to_string(n + 1) +
                                         " entries, got " + std::to_string(spec.size()));
        }
        std::vector<double> table;
        for (std::size_t m = 0; m < spec.size(); ++m) {
            table.push_back(as_number(spec[m], where + "[" + std::to_string(m) + "]"));
        }
        return table;
    }
    if (spec.is_object()) {
        reject_unknown(spec, where, {"intercept", "slope"});
        const double intercept = as_number(require(spec, where, "intercept"), join(where, "intercept"));
        const double slope = as_number(require(spec, where, "slope"), join(where, "slope"));
        std::vector<double> table;
        for (int m = 0; m <= n; ++m) {
            table.push_back(intercept + slope * m);
        }
        return table;
    }
    throw ConfigError(where, "expected a table of n+1 numbers or {intercept, slope}");
}

void check_table(const std::vector<double>& table, const std::string& where) {
    for (std::size_t m = 0; m < table.size(); ++m) {
        if (!(table[m] >= 0.0)) {
            throw ConfigError(where + "[" + std::to_string(m) + "]", "cost must be nonnegative");
        }
    }
}

std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

SystemModel RunConfig::model() const {
    return SystemModel(n, p, beta, operating_cost, inspection_cost, repair_cost);
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + locate(text, e.byte), "malformed JSON");
    }

    RunConfig cfg;
    reject_unknown(doc, "", {"n", "p", "beta", "costs", "solver", "simulation", "output"});

    cfg.n = as_int(require(doc, "", "n"), "n");
    if (cfg.n < 1) throw ConfigError("n", "must be at least 1");
    cfg.p = as_number(require(doc, "", "p"), "p");
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw ConfigError("p", "must lie in [0, 1]");
    cfg.beta = as_number(require(doc, "", "beta"), "beta");
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ConfigError("beta", "must lie in (0, 1)");

    const json& costs = require(doc, "", "costs");
    reject_unknown(costs, "costs", {"operating", "inspection", "repair"});
    cfg.operating_cost = cost_table(require(costs, "costs", "operating"), "costs.operating", cfg.n);
    cfg.inspection_cost = cost_table(require(costs, "costs", "inspection"), "costs.inspection", cfg.n);
    cfg.repair_cost = cost_table(require(costs, "costs", "repair"), "costs.repair", cfg.n);
    check_table(cfg.operating_cost, "costs.operating");
    check_table(cfg.inspection_cost, "costs.inspection");
    check_table(cfg.repair_cost, "costs.repair");

    const json& solver = require(doc, "", "solver");
    reject_unknown(solver, "solver", {"k", "epsilon", "tol"});
    if (solver.contains("k") == solver.contains("epsilon")) {
        throw ConfigError("solver", "exactly one of k and epsilon is required");
    }
    if (solver.contains("k")) {
        cfg.k = as_int(solver.at("k"), "solver.k");
        if (*cfg.k < 1) throw ConfigError("solver.k", "must be at least 1");
    } else {
        cfg.epsilon = as_number(solver.at("epsilon"), "solver.epsilon");
        if (!(*cfg.epsilon > 0.0)) throw ConfigError("solver.epsilon", "must be positive");
    }
    if (solver.contains("tol")) {
        cfg.tol = as_number(solver.at("tol"), "solver.tol");
        if (!(cfg.tol > 0.0)) throw ConfigError("solver.tol", "must be positive");
    }

    if (doc.contains("simulation")) {
        const json& sim = doc.at("simulation");
        reject_unknown(sim, "simulation", {"trajectories", "horizon", "tail_tol", "seed", "threads"});
        if (sim.contains("horizon") && sim.contains("tail_tol")) {
            throw ConfigError("simulation", "horizon and tail_tol are mutually exclusive");
        }
        if (sim.contains("trajectories")) {
            cfg.simulation.trajectories = as_integer(sim.at("trajectories"), "simulation.trajectories");
            if (cfg.simulation.trajectories < 1) {
                throw ConfigError("simulation.trajectories", "must be at least 1");
            }
        }
        if (sim.contains("horizon")) {
            cfg.simulation.horizon = as_int(sim.at("horizon"), "simulation.horizon");
            if (*cfg.simulation.horizon < 1) throw ConfigError("simulation.horizon", "must be at least 1");
        }
        if (sim.contains("tail_tol")) {
            cfg.simulation.tail_tol = as_number(sim.at("tail_tol"), "simulation.tail_tol");
            if (!(cfg.simulation.tail_tol > 0.0)) {
                throw ConfigError("simulation.tail_tol", "must be positive");
            }
        }
        if (sim.contains("seed")) {
            const json& seed = sim.at("seed");
            if (!seed.is_number_unsigned()) throw ConfigError("simulation.seed", "expected a nonnegative integer");
            cfg.simulation.seed = seed.get<std::uint64_t>();
        }
        if (sim.contains("threads")) {
            const std::int64_t threads = as_integer(sim.at("threads"), "simulation.threads");
            if (threads < 1 || threads > 1024) throw ConfigError("simulation.threads", "must lie in [1, 1024]");
            cfg.simulation.threads = static_cast<unsigned>(threads);
        }
    }

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        reject_unknown(out, "output", {"dir"});
        if (out.contains("dir")) {
            if (!out.at("dir").is_string()) throw ConfigError("output.dir", "expected a string");
            cfg.output_dir = out.at("dir").get<std::string>();
        }
    }

    try {
        (void)cfg.model();
    } catch (const std::exception& e) {
        throw ConfigError("model", e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

json to_json(const RunConfig& config) {
    json doc;
    doc["n"] = config.n;
    doc["p"] = config.p;
    doc["beta"] = config.beta;
    doc["costs"] = {
        {"operating", config.operating_cost},
        {"inspection", config.inspection_cost},
        {"repair", config.repair_cost},
    };
    json solver;
    if (config.k) solver["k"] = *config.k;
    if (config.epsilon) solver["epsilon"] = *config.epsilon;
    solver["tol"] = config.tol;
    doc["solver"] = solver;
    json sim;
    sim["trajectories"] = config.simulation.trajectories;
    if (config.simulation.horizon) {
        sim["horizon"] = *config.simulation.horizon;
    } else {
        sim["tail_tol"] = config.simulation.tail_tol;
    }
    sim["seed"] = config.simulation.seed;
    sim["threads"] = config.simulation.threads;
    doc["simulation"] = sim;
    if (config.output_dir) doc["output"] = {{"dir", *config.output_dir}};
    return doc;
}

}  // namespace faultmaint
