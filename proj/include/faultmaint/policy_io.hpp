#pragma once

// CSV files for solved grids.
//
// Policy grid: header `s,z,action,v,v1,v2,v3`, one row per state in ascending
// (s, z) order. action is the 1-based code. Reals are written in shortest
// round-trip form, so a reload reproduces the in-memory values exactly.
//
// Value table: header `s,z,v`, same ordering.

#include "faultmaint/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace faultmaint {

/// Raw action cells, rows indexed by s and columns by z.
struct ActionGrid {
    int rows = 0;
    int cols = 0;
    std::vector<Action> cells;

    Action at(int s, int z) const { return cells[static_cast<std::size_t>(s) * cols + z]; }
    friend bool operator==(const ActionGrid&, const ActionGrid&) = default;
};

ActionGrid to_grid(const Policy& policy);

struct PolicyGrid {
    ActionGrid grid;
    /// v and q populated; residual and sweep count are not stored in the file.
    ValueTable values;

    /// Executable policy; needs at least two rows (n >= 1).
    Policy policy() const;
};

void write_policy_csv(std::ostream& out, const Policy& policy, const ValueTable& table);
void write_policy_csv(const std::filesystem::path& path, const Policy& policy,
                      const ValueTable& table);

/// Throws ConfigError naming the offending line on any malformed content.
PolicyGrid read_policy_csv(std::istream& in, const std::string& source = "<policy>");
PolicyGrid read_policy_csv(const std::filesystem::path& path);

void write_value_csv(std::ostream& out, const ValueTable& table);
void write_value_csv(const std::filesystem::path& path, const ValueTable& table);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double x);

}  // namespace faultmaint
