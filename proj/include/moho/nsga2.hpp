#pragma once

#include <cstdint>
#include <vector>

#include "moho/problem.hpp"
#include "moho/scalarization.hpp"

namespace moho {

struct Individual {
    Vector x;
    Vector f;
    double violation = 0.0;  // sum of g_i^+ plus |h_j| beyond the equality tolerance
    int rank = 0;            // front index, 1-based after sorting
    double crowding = 0.0;   // +inf at front extremes
};

struct GaConfig {
    int population = 100;  // even, >= 4
    int generations = 100;
    double crossover_prob = 0.9;
    double crossover_eta = 20.0;
    double mutation_prob = -1.0;  // < 0 selects 1/n
    double mutation_eta = 20.0;
    double eq_tolerance = 1e-2;   // |h| slack treated as satisfied
    std::uint64_t seed = 42;

    void validate() const;
};

/// Constraint-domination: feasible beats infeasible; two infeasible compare
/// by violation; two feasible compare by componentwise Pareto dominance.
bool constraint_dominates(const Individual& a, const Individual& b);

/// Partition into fronts; rank fields of the input are updated (1-based).
std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& population);

/// Crowding distances for one front. Boundary individuals per objective get
/// +inf; fronts of size <= 2 are all +inf.
std::vector<double> crowding_distance(const std::vector<Individual>& front);

struct EvolveResult {
    FrontSet front;
    std::vector<Individual> final_population;
    std::vector<double> min_violation_history;  // one entry per generation, plus initial
    bool any_feasible = false;
};

EvolveResult evolve(const ProblemDefinition& problem, const GaConfig& cfg,
                    EvalCounters& counters);

}  // namespace moho
