#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moho/nlp.hpp"
#include "moho/problem.hpp"
#include "moho/report.hpp"

namespace moho {

struct CloudPoint {
    Vector x;
    Vector f;
    FeasibilityReport feasibility;
};

/// Retained sample points plus generation metadata. Rejected samples are
/// counted, not stored.
struct PointCloud {
    std::vector<CloudPoint> points;
    Box box;
    std::int64_t attempted = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::string method;  // "uniform-filter" | "projection" | "grid"
    std::int64_t failures = 0;
};

/// Uniform samples retained iff |h_j| <= eps for all j and g <= 0.
PointCloud uniform_feasibility_scan(const ProblemDefinition& problem, const Box& box,
                                    std::int64_t count, double eps, std::uint64_t seed,
                                    EvalCounters& counters);

/// Regular grid scan with the same retention rule; counts gives the number
/// of points per axis.
PointCloud grid_feasibility_scan(const ProblemDefinition& problem, const Box& box,
                                 const std::vector<int>& counts, double eps,
                                 EvalCounters& counters);

/// Projects uniform samples onto the constraint set; retains only optimal
/// projections satisfying |h| <= 1e-6 and g <= 1e-8.
PointCloud projected_cloud(const ProblemDefinition& problem, const Box& box,
                           std::int64_t count, std::uint64_t seed, EvalCounters& counters);

/// Indices of points not dominated by any other point (componentwise <=
/// with at least one strict <, at tolerance tol).
std::vector<int> nondominance_filter(const std::vector<Vector>& points, double tol);

/// True when `candidate` is strictly dominated by some row of `cloud`.
bool dominated_by_any(const Vector& candidate, const std::vector<Vector>& cloud, double tol);

struct MetricsRow {
    std::string method;
    double wall_seconds = 0.0;
    std::vector<std::int64_t> objective_evals;
    std::int64_t constraint_evals = 0;
    std::int64_t homotopy_evals = 0;
    std::int64_t homotopy_jacobian_evals = 0;
    bool homotopy_convention = false;  // report H/DH counts in the f columns
    double kkt_residual = 0.0;
    std::string solution_summary;
};

/// Aggregates reports per method; repeated methods sum counters and times.
std::vector<MetricsRow> metrics_report(const std::vector<SolveReport>& reports);

}  // namespace moho
