#include "moho/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace moho {

namespace {

// Uniform double in [0, 1) from the raw 64-bit stream; keeps the generator
// consumption identical across standard library implementations.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector sample_in_box(const Box& box, std::mt19937_64& rng) {
    Vector x(box.lower.size());
    for (int i = 0; i < x.size(); ++i) {
        x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * next_uniform(rng);
    }
    return x;
}

bool scan_retained(const Vector& g, const Vector& h, double eps) {
    for (int j = 0; j < h.size(); ++j) {
        if (std::abs(h[j]) > eps) return false;
    }
    for (int i = 0; i < g.size(); ++i) {
        if (g[i] > 0.0) return false;
    }
    return true;
}

CloudPoint make_point(const ProblemDefinition& pb, const Vector& x, EvalCounters& counters,
                      double tol_g, double tol_h) {
    CloudPoint point;
    point.x = x;
    point.f = evaluate_objectives(pb, x, counters);
    point.feasibility = feasibility_report(pb, x, counters, tol_g, tol_h);
    return point;
}

}  // namespace

PointCloud uniform_feasibility_scan(const ProblemDefinition& pb, const Box& box,
                                    std::int64_t count, double eps, std::uint64_t seed,
                                    EvalCounters& counters) {
    if (count < 1) throw std::invalid_argument("scan requires count >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("scan requires eps > 0");

    PointCloud cloud;
    cloud.box = box;
    cloud.attempted = count;
    cloud.eps = eps;
    cloud.seed = seed;
    cloud.method = "uniform-filter";

    std::mt19937_64 rng(seed);
    for (std::int64_t it = 0; it < count; ++it) {
        const Vector x = sample_in_box(box, rng);
        auto [g, h] = evaluate_constraints(pb, x, counters);
        if (scan_retained(g, h, eps)) {
            cloud.points.push_back(make_point(pb, x, counters, kDefaultTolG, eps));
        }
    }
    return cloud;
}

PointCloud grid_feasibility_scan(const ProblemDefinition& pb, const Box& box,
                                 const std::vector<int>& counts, double eps,
                                 EvalCounters& counters) {
    if (static_cast<int>(counts.size()) != pb.n()) {
        throw std::invalid_argument("grid needs one count per coordinate");
    }
    std::int64_t total = 1;
    for (int c : counts) {
        if (c < 2) throw std::invalid_argument("grid counts must be >= 2");
        total *= c;
    }

    PointCloud cloud;
    cloud.box = box;
    cloud.attempted = total;
    cloud.eps = eps;
    cloud.method = "grid";

    const int n = pb.n();
    std::vector<int> index(static_cast<std::size_t>(n), 0);
    Vector x(n);
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t rem = flat;
        for (int d = n - 1; d >= 0; --d) {
            index[static_cast<std::size_t>(d)] = static_cast<int>(rem % counts[static_cast<std::size_t>(d)]);
            rem /= counts[static_cast<std::size_t>(d)];
        }
        for (int d = 0; d < n; ++d) {
            const double frac = static_cast<double>(index[static_cast<std::size_t>(d)]) /
                                static_cast<double>(counts[static_cast<std::size_t>(d)] - 1);
            x[d] = box.lower[d] + (box.upper[d] - box.lower[d]) * frac;
        }
        auto [g, h] = evaluate_constraints(pb, x, counters);
        if (scan_retained(g, h, eps)) {
            cloud.points.push_back(make_point(pb, x, counters, kDefaultTolG, eps));
        }
    }
    return cloud;
}

PointCloud projected_cloud(const ProblemDefinition& pb, const Box& box, std::int64_t count,
                           std::uint64_t seed, EvalCounters& counters) {
    if (count < 1) throw std::invalid_argument("projection requires count >= 1");

    PointCloud cloud;
    cloud.box = box;
    cloud.attempted = count;
    cloud.seed = seed;
    cloud.method = "projection";

    std::mt19937_64 rng(seed);
    for (std::int64_t it = 0; it < count; ++it) {
        const Vector x0 = sample_in_box(box, rng);
        NlpResult proj;
        try {
            proj = project_to_feasible(pb, x0, counters);
        } catch (const std::exception&) {
            ++cloud.failures;
            continue;
        }
        const bool usable = proj.status == NlpStatus::optimal &&
                            proj.max_ineq_violation <= kDefaultTolG &&
                            proj.max_eq_violation <= kDefaultTolH;
        if (!usable) {
            ++cloud.failures;
            continue;
        }
        cloud.points.push_back(make_point(pb, proj.x, counters, kDefaultTolG, kDefaultTolH));
    }
    return cloud;
}

std::vector<int> nondominance_filter(const std::vector<Vector>& points, double tol) {
    const int count = static_cast<int>(points.size());
    std::vector<int> keep;
    for (int i = 0; i < count; ++i) {
        bool dominated = false;
        for (int j = 0; j < count && !dominated; ++j) {
            if (j == i) continue;
            bool all_leq = true;
            bool any_strict = false;
            for (int k = 0; k < points[static_cast<std::size_t>(i)].size(); ++k) {
                const double a = points[static_cast<std::size_t>(j)][k];
                const double b = points[static_cast<std::size_t>(i)][k];
                if (a > b + tol) all_leq = false;
                if (a < b - tol) any_strict = true;
            }
            dominated = all_leq && any_strict;
        }
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

bool dominated_by_any(const Vector& candidate, const std::vector<Vector>& cloud, double tol) {
    for (const Vector& other : cloud) {
        bool all_leq = true;
        bool any_strict = false;
        for (int k = 0; k < candidate.size(); ++k) {
            if (other[k] > candidate[k] + tol) all_leq = false;
            if (other[k] < candidate[k] - tol) any_strict = true;
        }
        if (all_leq && any_strict) return true;
    }
    return false;
}

std::vector<MetricsRow> metrics_report(const std::vector<SolveReport>& reports) {
    std::vector<MetricsRow> rows;
    std::map<std::string, std::size_t> index_of;
    for (const SolveReport& report : reports) {
        auto [it, inserted] = index_of.try_emplace(report.method, rows.size());
        if (inserted) {
            MetricsRow row;
            row.method = report.method;
            row.homotopy_convention = report.method == "homotopy";
            rows.push_back(std::move(row));
        }
        MetricsRow& row = rows[it->second];
        row.wall_seconds += report.wall_seconds;
        if (row.objective_evals.size() < report.counters.objective.size()) {
            row.objective_evals.resize(report.counters.objective.size(), 0);
        }
        for (std::size_t i = 0; i < report.counters.objective.size(); ++i) {
            row.objective_evals[i] += report.counters.objective[i];
        }
        row.constraint_evals += report.counters.constraints;
        row.homotopy_evals += report.counters.homotopy;
        row.homotopy_jacobian_evals += report.counters.homotopy_jacobian;
        row.kkt_residual = report.kkt_residual;
        std::ostringstream summary;
        summary << "f=" << format_vector(report.f, 4);
        row.solution_summary = summary.str();
    }
    return rows;
}

}  // namespace moho
