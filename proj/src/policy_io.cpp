#include "faultmaint/policy_io.hpp"

#include "faultmaint/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>
#include <vector>

namespace faultmaint {

namespace {

constexpr const char* kPolicyHeader = "s,z,action,v,v1,v2,v3";
constexpr const char* kValueHeader = "s,z,v";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_field(const std::string& text, const std::string& where) {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError(where, "cannot parse '" + text + "'");
    }
    return value;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError(path.string(), "cannot open for writing");
    }
    return out;
}

}  // namespace

std::string format_real(double x) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
    if (ec != std::errc{}) {
        throw NumericError("cannot format real");
    }
    return std::string(buffer, ptr);
}

void write_policy_csv(std::ostream& out, const Policy& policy, const ValueTable& table) {
    if (policy.n() != table.n() || policy.k() != table.k) {
        throw std::invalid_argument("policy and value table shapes differ");
    }
    out << kPolicyHeader << '\n';
    for (int s = 0; s <= policy.n(); ++s) {
        for (int z = 0; z <= policy.k(); ++z) {
            out << s << ',' << z << ',' << action_code(policy.at(s, z)) << ','
                << format_real(table.v(s, z)) << ',' << format_real(table.q[0](s, z)) << ','
                << format_real(table.q[1](s, z)) << ',' << format_real(table.q[2](s, z)) << '\n';
        }
    }
}

void write_policy_csv(const std::filesystem::path& path, const Policy& policy,
                      const ValueTable& table) {
    auto out = open_for_write(path);
    write_policy_csv(out, policy, table);
}

PolicyGrid read_policy_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(source, "empty policy file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPolicyHeader) {
        throw ConfigError(source + ": line 1", std::string("expected header '") + kPolicyHeader + "'");
    }

    struct Row {
        int s, z;
        Action action;
        double v, q1, q2, q3;
    };
    std::vector<Row> rows;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = source + ": line " + std::to_string(line_number);
        const auto fields = split_fields(line);
        if (fields.size() != 7) {
            throw ConfigError(where, "expected 7 fields, got " + std::to_string(fields.size()));
        }
        Row row{};
        row.s = parse_field<int>(fields[0], where);
        row.z = parse_field<int>(fields[1], where);
        const int code = parse_field<int>(fields[2], where);
        if (code < 1 || code > 3) {
            throw ConfigError(where, "action code " + std::to_string(code) + " is not 1, 2 or 3");
        }
        row.action = action_from_code(code);
        row.v = parse_field<double>(fields[3], where);
        row.q1 = parse_field<double>(fields[4], where);
        row.q2 = parse_field<double>(fields[5], where);
        row.q3 = parse_field<double>(fields[6], where);
        rows.push_back(row);
    }
    if (rows.empty()) {
        throw ConfigError(source, "policy file has no states");
    }

    int n = 0;
    int k = 0;
    for (const Row& r : rows) {
        n = std::max(n, r.s);
        k = std::max(k, r.z);
    }
    const std::size_t width = static_cast<std::size_t>(k) + 1;
    if (rows.size() != (static_cast<std::size_t>(n) + 1) * width) {
        throw ConfigError(source, "grid is not a full (n+1) x (k+1) table");
    }

    PolicyGrid out;
    out.grid.rows = n + 1;
    out.grid.cols = k + 1;
    out.grid.cells.reserve(rows.size());
    ValueTable& table = out.values;
    table.k = k;
    table.v.resize(n + 1, k + 1);
    for (auto& q : table.q) q.resize(n + 1, k + 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        const int s = static_cast<int>(i / width);
        const int z = static_cast<int>(i % width);
        if (r.s != s || r.z != z) {
            throw ConfigError(source + ": line " + std::to_string(i + 2),
                              "rows must be in ascending (s, z) order");
        }
        out.grid.cells.push_back(r.action);
        table.v(s, z) = r.v;
        table.q[0](s, z) = r.q1;
        table.q[1](s, z) = r.q2;
        table.q[2](s, z) = r.q3;
    }
    return out;
}

ActionGrid to_grid(const Policy& policy) {
    const auto actions = policy.actions();
    return ActionGrid{policy.n() + 1, policy.k() + 1, {actions.begin(), actions.end()}};
}

Policy PolicyGrid::policy() const {
    if (grid.rows < 2) {
        throw ConfigError("policy", "grid must cover s = 0..n with n >= 1");
    }
    return Policy(grid.rows - 1, grid.cols - 1, grid.cells, 0.0);
}

PolicyGrid read_policy_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open policy file");
    }
    return read_policy_csv(in, path.string());
}

void write_value_csv(std::ostream& out, const ValueTable& table) {
    out << kValueHeader << '\n';
    for (int s = 0; s <= table.n(); ++s) {
        for (int z = 0; z <= table.k; ++z) {
            out << s << ',' << z << ',' << format_real(table.v(s, z)) << '\n';
        }
    }
}

void write_value_csv(const std::filesystem::path& path, const ValueTable& table) {
    auto out = open_for_write(path);
    write_value_csv(out, table);
}

}  // namespace faultmaint
