#include "moho/bench.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "moho/nsga2.hpp"
#include "moho/registry.hpp"
#include "moho/scalarization.hpp"
#include "moho/tracker.hpp"

namespace moho {

namespace {

using Clock = std::chrono::steady_clock;

SolveReport timed(const std::string& method, const std::string& problem,
                  const std::function<SolveReport(EvalCounters&)>& body) {
    EvalCounters counters;
    SolveReport report;
    const auto started = Clock::now();
    try {
        report = body(counters);
    } catch (const std::exception& err) {
        report.method = method;
        report.problem = problem;
        report.converged = false;
        report.message = err.what();
    }
    report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    report.counters = counters;
    return report;
}

}  // namespace

std::vector<SolveReport> run_bench(const std::string& problem_name) {
    const ProblemDefinition& pb = get_problem(problem_name);
    const BenchPreset& preset = get_preset(problem_name);
    std::vector<SolveReport> reports;

    reports.push_back(timed("homotopy", problem_name, [&](EvalCounters& counters) {
        counters = EvalCounters(pb.p());
        Anchor anchor = init_anchor(pb, preset.homotopy_x0, preset.weights, preset.homotopy_u0);
        PathTrace path = trace(pb, anchor, TrackerConfig{}, counters);
        SolveReport report = report_from_trace(pb, path, counters);
        report.params["w"] = format_vector(preset.weights);
        report.params["x0"] = format_vector(preset.homotopy_x0);
        return report;
    }));

    reports.push_back(timed("wsm", problem_name, [&](EvalCounters& counters) {
        counters = EvalCounters(pb.p());
        return weighted_sum_solve(pb, preset.weights, preset.scalarization_x0, counters);
    }));

    reports.push_back(timed("ecm", problem_name, [&](EvalCounters& counters) {
        counters = EvalCounters(pb.p());
        Vector eps = Vector::Zero(pb.p());
        eps[1 - preset.epsilon_primary] = preset.epsilon_bound;
        return epsilon_constraint_solve(pb, preset.epsilon_primary, eps,
                                        preset.scalarization_x0, counters);
    }));

    reports.push_back(timed("gcm", problem_name, [&](EvalCounters& counters) {
        counters = EvalCounters(pb.p());
        return global_criterion_solve(pb, preset.scalarization_x0, preset.gcm_norm, counters,
                                      preset.seed);
    }));

    reports.push_back(timed("lex", problem_name, [&](EvalCounters& counters) {
        counters = EvalCounters(pb.p());
        return lexicographic_solve(pb, preset.lex_order, 1e-6, counters);
    }));

    reports.push_back(timed("nsga2", problem_name, [&](EvalCounters& counters) {
        counters = EvalCounters(pb.p());
        GaConfig cfg;
        cfg.population = preset.nsga_population;
        cfg.generations = preset.nsga_generations;
        cfg.eq_tolerance = preset.nsga_eq_tolerance;
        cfg.seed = preset.seed;
        EvolveResult evolved = evolve(pb, cfg, counters);

        // Report the front member that best serves the preset weights, the
        // same compromise direction the deterministic methods target.
        SolveReport report;
        report.method = "nsga2";
        report.problem = problem_name;
        report.converged = evolved.any_feasible;
        double best = std::numeric_limits<double>::infinity();
        for (const FrontEntry& entry : evolved.front.entries) {
            const double score = entry.f.dot(preset.weights);
            if (score < best) {
                best = score;
                report.x = entry.x;
                report.f = entry.f;
                report.g = entry.feasibility.g_values;
                report.h = entry.feasibility.h_values;
                report.feasible = entry.feasibility.feasible;
            }
        }
        report.kkt_residual = std::numeric_limits<double>::quiet_NaN();
        report.params["N"] = std::to_string(cfg.population);
        report.params["T"] = std::to_string(cfg.generations);
        report.params["seed"] = std::to_string(cfg.seed);
        report.message = evolved.any_feasible ? "front-1 feasible" : "no feasible individual";
        return report;
    }));

    return reports;
}

}  // namespace moho
