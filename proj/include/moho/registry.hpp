#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moho/problem.hpp"

namespace moho {

/// Registered per-problem defaults for the benchmark harness: starts,
/// weights, epsilon bound, and method parameters used by `bench`.
struct BenchPreset {
    Vector scalarization_x0;   // start for WSM / ECM / GCM / lexicographic
    Vector homotopy_x0;        // anchor start (must satisfy g < 0)
    Vector homotopy_u0;
    Vector weights;            // default scalarization weights
    std::vector<Vector> alternate_starts;  // robustness sweep starts
    std::vector<Vector> alternate_weights;
    int epsilon_primary = 0;   // ECM primary objective index
    double epsilon_bound = 0;  // ECM bound on the non-primary objective
    double gcm_norm = 2.0;
    std::vector<int> lex_order;
    int nsga_population = 100;
    int nsga_generations = 200;
    double nsga_eq_tolerance = 1e-2;
    std::uint64_t seed = 42;
    // Registered grid-scan convention (2-D problems only).
    std::vector<int> grid_counts;
    double grid_eps = 0.0;
};

/// Returns the registered problem with analytic derivatives wired in.
/// Throws std::invalid_argument listing available names on a miss.
const ProblemDefinition& get_problem(const std::string& name);

const BenchPreset& get_preset(const std::string& name);

std::vector<std::string> problem_names();

}  // namespace moho
