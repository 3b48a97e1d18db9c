#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moho/nlp.hpp"
#include "moho/problem.hpp"
#include "moho/report.hpp"

namespace moho {

/// Weight vectors on the unit simplex (nonnegative, summing to one).
struct WeightGrid {
    std::vector<Vector> weights;

    static WeightGrid uniform(int p, int count);
    void validate() const;
};

/// Epsilon bounds for the constrained-objective method. Entry `primary` of
/// each vector is unused.
struct EpsilonGrid {
    int primary = 0;
    std::vector<Vector> bounds;

    void validate(int p) const;
};

struct FrontEntry {
    Vector x;
    Vector f;
    std::string method;
    std::string params;
    FeasibilityReport feasibility;
    double kkt_residual = 0.0;
};

struct FrontSet {
    std::vector<FrontEntry> entries;
    std::vector<std::string> notes;  // skipped/failed runs

    /// Entries surviving a nondominance pass at tolerance tol.
    FrontSet filtered_nondominated(double tol = 1e-6) const;
};

/// Retention tolerances for front entries.
inline constexpr double kFrontTolG = 1e-6;
inline constexpr double kFrontTolH = 1e-5;

FrontSet weighted_sum_front(const ProblemDefinition& problem, const WeightGrid& grid,
                            const Vector& x0, EvalCounters& counters);

FrontSet epsilon_constraint_front(const ProblemDefinition& problem, const EpsilonGrid& grid,
                                  const Vector& x0, EvalCounters& counters);

struct IdealPoint {
    Vector f_star;  // per-objective minima over the feasible set
    Vector scales;  // strictly positive normalization factors
};

IdealPoint ideal_point(const ProblemDefinition& problem, const Vector& x0,
                       EvalCounters& counters, std::uint64_t seed = 20240 /*cloud seed*/,
                       int cloud_count = 1000);

SolveReport global_criterion_solve(const ProblemDefinition& problem, const Vector& x0,
                                   double norm_p, EvalCounters& counters,
                                   std::uint64_t seed = 20240, int cloud_count = 1000);

/// Sequential priority minimization; stage optima are carried forward as
/// f_k <= f_k* + tol_lex bounds. Throws StageInfeasibleError when a stage
/// subproblem has no feasible point.
SolveReport lexicographic_solve(const ProblemDefinition& problem,
                                const std::vector<int>& priority_order, double tol_lex,
                                EvalCounters& counters);

/// Single weighted-sum solve (one grid point), reported like other methods.
SolveReport weighted_sum_solve(const ProblemDefinition& problem, const Vector& w,
                               const Vector& x0, EvalCounters& counters);

SolveReport epsilon_constraint_solve(const ProblemDefinition& problem, int primary,
                                     const Vector& bounds, const Vector& x0,
                                     EvalCounters& counters);

/// Evenly spaced epsilon vectors between cloud objective minima and maxima,
/// per non-primary objective.
EpsilonGrid auto_epsilon_grid(const ProblemDefinition& problem, int primary, int per_axis,
                              EvalCounters& counters, std::uint64_t seed = 20240,
                              int cloud_count = 1000);

}  // namespace moho
