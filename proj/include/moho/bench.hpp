#pragma once

#include <string>
#include <vector>

#include "moho/report.hpp"

namespace moho {

/// Runs all six methods on a registered problem with its bench preset and
/// returns one report per method (homotopy, wsm, ecm, gcm, lex, nsga2).
/// Individual method failures are recorded in the report message; the run
/// continues.
std::vector<SolveReport> run_bench(const std::string& problem_name);

}  // namespace moho
