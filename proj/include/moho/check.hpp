#pragma once

#include <string>
#include <vector>

#include "moho/problem.hpp"

namespace moho {

/// One verified cell of the reference-solution table.
struct CheckCell {
    std::string point;
    std::string quantity;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::vector<CheckCell> cells;
    // Feasibility flags at tolerance 1e-3 per reference point.
    std::vector<std::pair<std::string, bool>> feasibility;
    bool all_pass = true;
};

/// Evaluates the 5-variable benchmark at the three reference solutions from
/// the literature and compares objective and constraint values against the
/// tabulated numbers at 1e-3 absolute tolerance.
CheckReport literature_check(EvalCounters& counters);

}  // namespace moho
