// Command-line front end: single solves, front sweeps, feasibility sampling,
// the six-method benchmark table, and reference-point verification.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moho/bench.hpp"
#include "moho/check.hpp"
#include "moho/nsga2.hpp"
#include "moho/registry.hpp"
#include "moho/scalarization.hpp"
#include "moho/serialize.hpp"
#include "moho/tracker.hpp"

namespace fs = std::filesystem;
using namespace moho;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

Vector parse_vector(const std::string& text) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item == "inf") {
            values.push_back(std::numeric_limits<double>::infinity());
        } else {
            values.push_back(std::stod(item));
        }
    }
    Vector v(static_cast<int>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<int>(i)] = values[i];
    return v;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) values.push_back(std::stoi(item));
    return values;
}

fs::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("MOHO_OUT_DIR")) return env;
    return ".";
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
}

struct SolveOptions {
    std::string problem;
    std::string method;
    std::string weights;
    std::string x0;
    std::string u0;
    std::string eps;
    std::string order;
    double norm_p = 2.0;
    double tol_lex = 1e-6;
    int primary = 0;
    int population = 100;
    int generations = 200;
    double eq_tol = 1e-2;
    std::uint64_t seed = 0;
    bool have_seed = false;
    std::string out;
    std::string format = "json";
};

SolveReport dispatch_solve(const SolveOptions& opt, PathTrace* trace_out) {
    const ProblemDefinition& pb = get_problem(opt.problem);
    const BenchPreset& preset = get_preset(opt.problem);
    const Vector x0 = opt.x0.empty()
                          ? (opt.method == "homotopy" ? preset.homotopy_x0
                                                      : preset.scalarization_x0)
                          : parse_vector(opt.x0);
    const Vector w = opt.weights.empty() ? preset.weights : parse_vector(opt.weights);
    const std::uint64_t seed = opt.have_seed ? opt.seed : preset.seed;
    EvalCounters counters(pb.p());
    const auto started = std::chrono::steady_clock::now();
    SolveReport report;

    if (opt.method == "homotopy") {
        const Vector u0 = opt.u0.empty() ? preset.homotopy_u0 : parse_vector(opt.u0);
        Anchor anchor = init_anchor(pb, x0, w, u0);
        PathTrace path = trace(pb, anchor, TrackerConfig{}, counters);
        if (trace_out) *trace_out = path;
        report = report_from_trace(pb, path, counters);
        report.params["w"] = format_vector(anchor.w0);
    } else if (opt.method == "wsm") {
        report = weighted_sum_solve(pb, w, x0, counters);
    } else if (opt.method == "ecm") {
        Vector eps;
        if (!opt.eps.empty()) {
            eps = parse_vector(opt.eps);
        } else {
            eps = Vector::Zero(pb.p());
            eps[1 - preset.epsilon_primary] = preset.epsilon_bound;
        }
        report = epsilon_constraint_solve(pb, opt.primary, eps, x0, counters);
    } else if (opt.method == "gcm") {
        report = global_criterion_solve(pb, x0, opt.norm_p, counters, seed);
    } else if (opt.method == "lex") {
        const std::vector<int> order =
            opt.order.empty() ? preset.lex_order : parse_ints(opt.order);
        report = lexicographic_solve(pb, order, opt.tol_lex, counters);
    } else if (opt.method == "nsga2") {
        GaConfig cfg;
        cfg.population = opt.population;
        cfg.generations = opt.generations;
        cfg.eq_tolerance = opt.eq_tol;
        cfg.seed = seed;
        EvolveResult evolved = evolve(pb, cfg, counters);
        report.method = "nsga2";
        report.problem = opt.problem;
        report.converged = evolved.any_feasible;
        double best = std::numeric_limits<double>::infinity();
        for (const FrontEntry& entry : evolved.front.entries) {
            const double score = entry.f.dot(w / w.sum());
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
        report.message = evolved.any_feasible ? "front-1 feasible" : "no feasible individual";
    } else {
        throw CLI::ValidationError("--method", "unknown method '" + opt.method + "'");
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.counters = counters;
    return report;
}

int cmd_solve(const SolveOptions& opt) {
    PathTrace path;
    SolveReport report = dispatch_solve(opt, &path);

    const fs::path dir = output_dir(opt.out);
    fs::create_directories(dir);
    const std::string stem = opt.problem + "_" + opt.method;
    if (opt.format == "json") {
        write_file(dir / (stem + "_report.json"), report_to_json(report));
    } else {
        const ProblemDefinition& pb = get_problem(opt.problem);
        std::ostringstream out;
        write_solutions_csv(out, {report}, pb.n(), pb.p());
        write_file(dir / (stem + "_report.csv"), out.str());
    }
    if (opt.method == "homotopy") {
        std::ostringstream out;
        write_trace_csv(out, path);
        write_file(dir / (stem + "_trace.csv"), out.str());
    }

    std::cout << report.method << " on " << report.problem << ": f = ["
              << format_vector(report.f, 6) << "], kkt = " << report.kkt_residual
              << ", feasible = " << (report.feasible ? "yes" : "no")
              << ", converged = " << (report.converged ? "yes" : "no") << "\n";
    return report.converged ? kExitOk : kExitSolverFailure;
}

struct FrontOptions {
    std::string problem;
    std::string method;
    int weights_count = 0;
    int eps_count = 0;
    std::string x0;
    std::string u0;
    int primary = 0;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool parallel = false;
    std::string out;
};

int cmd_front(const FrontOptions& opt) {
    const ProblemDefinition& pb = get_problem(opt.problem);
    const BenchPreset& preset = get_preset(opt.problem);
    const std::uint64_t seed = opt.have_seed ? opt.seed : preset.seed;
    EvalCounters counters(pb.p());
    FrontSet front;

    if (opt.method == "homotopy") {
        if (opt.weights_count < 1) {
            throw CLI::ValidationError("--weights-count", "homotopy fronts need >= 1 weights");
        }
        const Vector x0 = opt.x0.empty() ? preset.homotopy_x0 : parse_vector(opt.x0);
        const Vector u0 = opt.u0.empty() ? preset.homotopy_u0 : parse_vector(opt.u0);
        WeightGrid grid = WeightGrid::uniform(pb.p(), opt.weights_count);
        auto reports = pareto_front_homotopy(pb, grid.weights, x0, u0, TrackerConfig{},
                                             counters, opt.parallel);
        for (const SolveReport& report : reports) {
            if (!report.converged) {
                front.notes.push_back("w=" + report.params.at("w") + ": " + report.message);
                continue;
            }
            FrontEntry entry;
            entry.x = report.x;
            entry.f = report.f;
            entry.method = report.method;
            entry.params = "w=" + report.params.at("w");
            entry.feasibility.g_values = report.g;
            entry.feasibility.h_values = report.h;
            entry.feasibility.feasible = report.feasible;
            entry.kkt_residual = report.kkt_residual;
            front.entries.push_back(std::move(entry));
        }
    } else if (opt.method == "wsm") {
        if (opt.weights_count < 1) {
            throw CLI::ValidationError("--weights-count", "weighted-sum fronts need >= 1 weights");
        }
        const Vector x0 = opt.x0.empty() ? preset.scalarization_x0 : parse_vector(opt.x0);
        WeightGrid grid = WeightGrid::uniform(pb.p(), opt.weights_count);
        front = weighted_sum_front(pb, grid, x0, counters);
    } else if (opt.method == "ecm") {
        if (opt.eps_count < 1) {
            throw CLI::ValidationError("--eps-count", "epsilon fronts need >= 1 grid points");
        }
        const Vector x0 = opt.x0.empty() ? preset.scalarization_x0 : parse_vector(opt.x0);
        EpsilonGrid grid = auto_epsilon_grid(pb, opt.primary, opt.eps_count, counters, seed);
        front = epsilon_constraint_front(pb, grid, x0, counters);
    } else {
        throw CLI::ValidationError("--method", "front supports homotopy, wsm, ecm");
    }

    const fs::path dir = output_dir(opt.out);
    fs::create_directories(dir);
    const std::string stem = opt.problem + "_" + opt.method;
    std::ostringstream out;
    write_front_csv(out, front, pb.n(), pb.p(), pb.m(), pb.s());
    write_file(dir / (stem + "_front.csv"), out.str());

    nlohmann::json summary;
    summary["entries"] = front.entries.size();
    summary["notes"] = front.notes;
    summary["counters"] = {{"objective", counters.objective},
                           {"constraints", counters.constraints},
                           {"homotopy", counters.homotopy},
                           {"homotopy_jacobian", counters.homotopy_jacobian}};
    write_file(dir / (stem + "_front_summary.json"), summary.dump(2));

    std::cout << "front: " << front.entries.size() << " entries, " << front.notes.size()
              << " notes -> " << (dir / (stem + "_front.csv")).string() << "\n";
    return front.entries.empty() ? kExitSolverFailure : kExitOk;
}

struct SampleOptions {
    std::string problem;
    std::string mode = "scan";
    std::int64_t count = 10000;
    double eps = 0.01;
    std::string eps_sweep;
    std::string grid_counts;
    std::uint64_t seed = 0;
    bool have_seed = false;
    std::string out;
};

int cmd_sample(const SampleOptions& opt) {
    const ProblemDefinition& pb = get_problem(opt.problem);
    const BenchPreset& preset = get_preset(opt.problem);
    const std::uint64_t seed = opt.have_seed ? opt.seed : preset.seed;
    EvalCounters counters(pb.p());
    const fs::path dir = output_dir(opt.out);
    fs::create_directories(dir);

    auto dump = [&](const PointCloud& cloud, const std::string& name) {
        std::ostringstream out;
        write_cloud_csv(out, cloud, pb.n(), pb.p());
        write_file(dir / name, out.str());
        std::cout << name << ": retained " << cloud.points.size() << " of " << cloud.attempted
                  << "\n";
    };

    if (opt.mode == "scan") {
        std::vector<double> sweep;
        if (!opt.eps_sweep.empty()) {
            const Vector parsed = parse_vector(opt.eps_sweep);
            sweep.assign(parsed.data(), parsed.data() + parsed.size());
        } else {
            sweep.push_back(opt.eps);
        }
        for (double eps : sweep) {
            PointCloud cloud = uniform_feasibility_scan(pb, pb.sampling_box(), opt.count, eps,
                                                        seed, counters);
            std::ostringstream name;
            name << opt.problem << "_scan_eps" << eps << ".csv";
            dump(cloud, name.str());
        }
    } else if (opt.mode == "project") {
        PointCloud cloud = projected_cloud(pb, pb.sampling_box(), opt.count, seed, counters);
        dump(cloud, opt.problem + "_projected.csv");
    } else if (opt.mode == "grid") {
        std::vector<int> counts;
        if (!opt.grid_counts.empty()) {
            counts = parse_ints(opt.grid_counts);
        } else if (!preset.grid_counts.empty()) {
            counts = preset.grid_counts;
        } else {
            throw CLI::ValidationError("--grid-counts", "no registered grid for this problem");
        }
        const double eps = opt.eps_sweep.empty() && opt.eps == 0.01 && preset.grid_eps > 0
                               ? preset.grid_eps
                               : opt.eps;
        PointCloud cloud = grid_feasibility_scan(pb, pb.sampling_box(), counts, eps, counters);
        dump(cloud, opt.problem + "_grid.csv");
    } else {
        throw CLI::ValidationError("--mode", "sample supports scan, project, grid");
    }
    return kExitOk;
}

int cmd_bench(const std::string& problem, const std::string& out) {
    const ProblemDefinition& pb = get_problem(problem);
    const std::vector<SolveReport> reports = run_bench(problem);
    const std::vector<MetricsRow> rows = metrics_report(reports);

    const fs::path dir = output_dir(out);
    fs::create_directories(dir);
    {
        std::ostringstream stream;
        write_metrics_csv(stream, rows, pb.p());
        write_file(dir / (problem + "_metrics.csv"), stream.str());
    }
    {
        std::ostringstream stream;
        write_solutions_csv(stream, reports, pb.n(), pb.p());
        write_file(dir / (problem + "_solutions.csv"), stream.str());
    }

    bool any_failed = false;
    for (const SolveReport& report : reports) {
        std::cout << report.method << ": f = [" << format_vector(report.f, 6)
                  << "], wall = " << report.wall_seconds << "s"
                  << (report.converged ? "" : "  [FAILED: " + report.message + "]") << "\n";
        any_failed = any_failed || !report.converged;
    }
    std::cout << "tables -> " << (dir / (problem + "_metrics.csv")).string() << ", "
              << (dir / (problem + "_solutions.csv")).string() << "\n";
    return any_failed ? kExitSolverFailure : kExitOk;
}

int cmd_check() {
    EvalCounters counters(2);
    const CheckReport report = literature_check(counters);
    for (const CheckCell& cell : report.cells) {
        std::cout << (cell.pass ? "PASS" : "FAIL") << "  " << cell.point << "." << cell.quantity
                  << "  expected " << cell.expected << "  got " << cell.actual << "\n";
    }
    for (const auto& [name, feasible] : report.feasibility) {
        std::cout << "INFO  " << name << " feasible(1e-3) = " << (feasible ? "yes" : "no")
                  << "\n";
    }
    std::cout << (report.all_pass ? "CHECK PASSED" : "CHECK FAILED") << "\n";
    return report.all_pass ? kExitOk : kExitSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moho: homotopy-continuation multiobjective optimization toolkit"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "run one method once");
    solve->add_option("--problem", solve_opt.problem, "registered problem name")->required();
    solve->add_option("--method", solve_opt.method,
                      "homotopy | wsm | ecm | gcm | lex | nsga2")->required();
    solve->add_option("--w", solve_opt.weights, "comma-separated weights");
    solve->add_option("--x0", solve_opt.x0, "start point");
    solve->add_option("--u0", solve_opt.u0, "homotopy inequality multipliers");
    solve->add_option("--eps", solve_opt.eps, "epsilon bounds (ecm)");
    solve->add_option("--primary", solve_opt.primary, "primary objective index (ecm)");
    solve->add_option("--norm-p", solve_opt.norm_p, "norm parameter (gcm)");
    solve->add_option("--order", solve_opt.order, "priority order (lex), e.g. 0,1");
    solve->add_option("--tol-lex", solve_opt.tol_lex, "stage relaxation (lex)");
    solve->add_option("--pop", solve_opt.population, "population size (nsga2)");
    solve->add_option("--gens", solve_opt.generations, "generations (nsga2)");
    solve->add_option("--eq-tol", solve_opt.eq_tol, "equality tolerance (nsga2)");
    solve->add_option("--seed", solve_opt.seed, "random seed")
        ->each([&](const std::string&) { solve_opt.have_seed = true; });
    solve->add_option("--out", solve_opt.out, "output directory (default $MOHO_OUT_DIR)");
    solve->add_option("--format", solve_opt.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    FrontOptions front_opt;
    CLI::App* front = app.add_subcommand("front", "sweep a front-generating method");
    front->add_option("--problem", front_opt.problem)->required();
    front->add_option("--method", front_opt.method, "homotopy | wsm | ecm")->required();
    front->add_option("--weights-count", front_opt.weights_count, "number of weights");
    front->add_option("--eps-count", front_opt.eps_count, "number of epsilon grid points");
    front->add_option("--x0", front_opt.x0);
    front->add_option("--u0", front_opt.u0);
    front->add_option("--primary", front_opt.primary);
    front->add_option("--seed", front_opt.seed)
        ->each([&](const std::string&) { front_opt.have_seed = true; });
    front->add_flag("--parallel", front_opt.parallel, "run sweep points concurrently");
    front->add_option("--out", front_opt.out);

    SampleOptions sample_opt;
    CLI::App* sample = app.add_subcommand("sample", "feasibility scans and projected clouds");
    sample->add_option("--problem", sample_opt.problem)->required();
    sample->add_option("--mode", sample_opt.mode, "scan | project | grid");
    sample->add_option("--count", sample_opt.count)->check(CLI::PositiveNumber);
    sample->add_option("--eps", sample_opt.eps, "feasibility tolerance");
    sample->add_option("--eps-sweep", sample_opt.eps_sweep, "comma-separated eps values");
    sample->add_option("--grid-counts", sample_opt.grid_counts, "per-axis grid counts");
    sample->add_option("--seed", sample_opt.seed)
        ->each([&](const std::string&) { sample_opt.have_seed = true; });
    sample->add_option("--out", sample_opt.out);

    std::string bench_problem, bench_out;
    CLI::App* bench = app.add_subcommand("bench", "run all six methods with presets");
    bench->add_option("--problem", bench_problem)->required();
    bench->add_option("--out", bench_out);

    CLI::App* check = app.add_subcommand("check", "verify tabulated reference points");
    (void)check;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opt);
        if (front->parsed()) return cmd_front(front_opt);
        if (sample->parsed()) return cmd_sample(sample_opt);
        if (bench->parsed()) return cmd_bench(bench_problem, bench_out);
        if (check->parsed()) return cmd_check();
    } catch (const CLI::ValidationError& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitUsage;
}
