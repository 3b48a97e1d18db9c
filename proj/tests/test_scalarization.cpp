#include <doctest.h>

#include "moho/registry.hpp"
#include "moho/sampling.hpp"
#include "moho/scalarization.hpp"
#include "support.hpp"

using namespace moho;

namespace {

Vector vec(std::initializer_list<double> vals) {
    Vector v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

}  // namespace

TEST_CASE("weight grids live on the simplex") {
    WeightGrid grid = WeightGrid::uniform(2, 11);
    grid.validate();
    CHECK(grid.weights.size() == 11);
    for (const Vector& w : grid.weights) {
        CHECK(w.minCoeff() > 0.0);
        CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
    }

    WeightGrid bad;
    bad.weights.push_back(vec({0.5, 0.6}));
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    WeightGrid empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_CASE("weighted-sum solve on the 5-variable benchmark") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    SolveReport report = weighted_sum_solve(five, vec({0.4, 0.6}), vec({1, 2, 0, 1, 1}),
                                            counters);
    REQUIRE(report.converged);
    CHECK(std::abs(report.f[0] - 2.7308) < 2e-2);
    CHECK(std::abs(report.f[1] - (-0.4110)) < 2e-2);
    CHECK(report.feasible);
    CHECK(report.kkt_residual <= 1e-6);
    CHECK(counters.objective[0] == counters.objective[1]);  // joint evaluation
}

TEST_CASE("weighted-sum front") {
    const ProblemDefinition& two = get_problem("ex1_2d");

    SUBCASE("any weight finds the unique Pareto point") {
        EvalCounters counters(2);
        WeightGrid grid;
        grid.weights = {vec({0.2, 0.8}), vec({0.5, 0.5}), vec({0.8, 0.2})};
        FrontSet front = weighted_sum_front(two, grid, vec({0, 0}), counters);
        REQUIRE(front.entries.size() == 3);
        for (const FrontEntry& entry : front.entries) {
            CHECK(std::abs(entry.f[0] - 0.75) < 5e-2);
            CHECK(std::abs(entry.f[1] - 0.85) < 5e-2);
            CHECK(entry.feasibility.feasible);
            CHECK(entry.kkt_residual <= 1e-6);
        }
    }

    SUBCASE("single objective reduces to plain minimization") {
        std::vector<ScalarFunction> objectives(1);
        objectives[0] = {
            [](const Vector& x) { return (x[0] - 3.0) * (x[0] - 3.0); },
            [](const Vector& x) -> Vector { return vec({2.0 * (x[0] - 3.0)}); },
            [](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(1, 1); },
        };
        std::vector<ScalarFunction> ineq(1);
        ineq[0] = {
            [](const Vector& x) { return -x[0]; },  // x >= 0
            [](const Vector&) -> Vector { return vec({-1.0}); },
            [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); },
        };
        ProblemDefinition scalar("scalar", 1, 1, 1, 0, objectives, ineq, {},
                                 Box{vec({-5}), vec({5})});
        EvalCounters counters(1);
        WeightGrid grid;
        grid.weights = {vec({1.0})};
        FrontSet front = weighted_sum_front(scalar, grid, vec({0}), counters);
        REQUIRE(front.entries.size() == 1);
        CHECK(front.entries[0].x[0] == doctest::Approx(3.0).epsilon(1e-6));
    }
}

TEST_CASE("epsilon-constraint solve matches the tabulated compromise") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    Vector eps = vec({0.0, -0.4});
    SolveReport report = epsilon_constraint_solve(five, 0, eps, vec({1, 2, 0, 1, 1}), counters);
    REQUIRE(report.converged);
    CHECK(std::abs(report.f[0] - 2.7143) < 2e-2);
    CHECK(std::abs(report.f[1] - (-0.4000)) < 2e-2);
    // The added bound is active at the solution.
    CHECK(report.f[1] <= -0.4 + 1e-6);
    CHECK(report.f[1] >= -0.4 - 1e-4);
}

TEST_CASE("epsilon-constraint front behaviors") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);

    SUBCASE("infinite bound equals plain primary minimization") {
        const double inf = std::numeric_limits<double>::infinity();
        SolveReport bounded = epsilon_constraint_solve(five, 0, vec({0.0, inf}),
                                                       vec({1, 2, 0, 1, 1}), counters);
        auto shared = vec({1, 2, 0, 1, 1});
        // Plain minimization of f1 via the ideal-point machinery.
        IdealPoint ideal = ideal_point(five, shared, counters, 7, 50);
        CHECK(std::abs(bounded.f[0] - ideal.f_star[0]) <= 1e-4);
    }

    SUBCASE("unattainable bound is recorded as infeasible") {
        EpsilonGrid grid;
        grid.primary = 0;
        grid.bounds = {vec({0.0, -40.0}), vec({0.0, -0.4})};  // f2 can't go below ~-11.6
        FrontSet front = epsilon_constraint_front(five, grid, vec({1, 2, 0, 1, 1}), counters);
        CHECK(front.entries.size() == 1);
        REQUIRE(front.notes.size() == 1);
        CHECK(front.notes[0].find("infeasible") != std::string::npos);
    }

    SUBCASE("entries respect their epsilon bounds") {
        EvalCounters c(2);
        EpsilonGrid grid = auto_epsilon_grid(five, 0, 5, c, 11, 120);
        FrontSet front = epsilon_constraint_front(five, grid, vec({1, 2, 0, 1, 1}), c);
        CHECK(!front.entries.empty());
        for (std::size_t i = 0; i < front.entries.size(); ++i) {
            const FrontEntry& entry = front.entries[i];
            const double bound = std::stod(entry.params.substr(entry.params.rfind(',') + 1));
            CHECK(entry.f[1] <= bound + 1e-6);
        }
    }
}

TEST_CASE("ideal point and scales") {
    const ProblemDefinition& two = get_problem("ex1_2d");
    EvalCounters counters(2);
    IdealPoint ideal = ideal_point(two, vec({0, 0}), counters, 13, 200);
    // The ideal dominates the unique Pareto point.
    CHECK(ideal.f_star[0] <= 0.75 + 1e-6);
    CHECK(ideal.f_star[1] <= 0.85 + 1e-6);
    CHECK(ideal.scales.minCoeff() > 0.0);
}

TEST_CASE("global criterion returns a nondominated feasible point") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    SolveReport report = global_criterion_solve(five, vec({1, 2, 0, 1, 1}), 2.0, counters,
                                                17, 300);
    REQUIRE(report.converged);
    CHECK(report.feasible);
    CHECK(report.h.cwiseAbs().maxCoeff() <= 1e-5);
    CHECK(report.g.maxCoeff() <= 0.0);

    // Dominance oracle against a projected cloud.
    PointCloud cloud = projected_cloud(five, five.sampling_box(), 500, 31, counters);
    std::vector<Vector> fs;
    for (const CloudPoint& point : cloud.points) fs.push_back(point.f);
    CHECK_FALSE(dominated_by_any(report.f, fs, 1e-3));
}

TEST_CASE("global criterion norms 1 and 2 both return feasible points") {
    const ProblemDefinition& two = get_problem("ex1_2d");
    EvalCounters counters(2);
    SolveReport l2 = global_criterion_solve(two, vec({0, 0}), 2.0, counters, 19, 150);
    CHECK(l2.feasible);
    SolveReport l1 = global_criterion_solve(two, vec({0, 0}), 1.0, counters, 19, 150);
    CHECK(l1.feasible);
    CHECK_THROWS_AS(global_criterion_solve(two, vec({0, 0}), 0.5, counters), std::invalid_argument);
}

TEST_CASE("lexicographic solve") {
    const ProblemDefinition& two = get_problem("ex1_2d");
    EvalCounters counters(2);

    SUBCASE("order (1,2) runs both stages feasibly") {
        SolveReport report = lexicographic_solve(two, {0, 1}, 1e-6, counters);
        CHECK(report.converged);
        CHECK(report.feasible);
        CHECK(report.params.at("order") == "0,1");
    }

    SUBCASE("reversed order also completes; only stagewise optimality holds") {
        SolveReport report = lexicographic_solve(two, {1, 0}, 1e-6, counters);
        CHECK(report.converged);
        CHECK(report.feasible);
    }

    SUBCASE("stage optima are monotone in tol_lex") {
        SolveReport tight = lexicographic_solve(two, {0, 1}, 1e-8, counters);
        SolveReport loose = lexicographic_solve(two, {0, 1}, 1e-2, counters);
        // Stage 2 minimizes f2 under f1 <= f1* + tol; a larger tol can only
        // lower the achievable optimum.
        CHECK(loose.f[1] <= tight.f[1] + 1e-6);
    }

    SUBCASE("invalid permutations are rejected") {
        CHECK_THROWS_AS(lexicographic_solve(two, {0, 0}, 1e-6, counters),
                        std::invalid_argument);
        CHECK_THROWS_AS(lexicographic_solve(two, {0}, 1e-6, counters), std::invalid_argument);
    }
}

TEST_CASE("single-stage lexicographic equals plain minimization") {
    std::vector<ScalarFunction> objectives(1);
    objectives[0] = {
        [](const Vector& x) { return x.squaredNorm(); },
        [](const Vector& x) -> Vector { return 2.0 * x; },
        [](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(2, 2); },
    };
    std::vector<ScalarFunction> eq(1);
    eq[0] = {
        [](const Vector& x) { return x[0] + x[1] - 1.0; },
        [](const Vector&) -> Vector { return vec({1, 1}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(2, 2); },
    };
    ProblemDefinition pb("line", 2, 1, 0, 1, objectives, {}, eq,
                         Box{vec({-2, -2}), vec({2, 2})});
    EvalCounters counters(1);
    SolveReport report = lexicographic_solve(pb, {0}, 1e-6, counters);
    CHECK(report.x[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(report.x[1] == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("front entries pass the module feasibility gate and nondominance") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    WeightGrid grid;
    grid.weights = {vec({0.3, 0.7}), vec({0.5, 0.5}), vec({0.7, 0.3})};
    FrontSet front = weighted_sum_front(five, grid, vec({1, 2, 0, 1, 1}), counters);

    for (const FrontEntry& entry : front.entries) {
        EvalCounters scratch(2);
        FeasibilityReport report =
            feasibility_report(five, entry.x, scratch, 1e-6, 1e-5);
        CHECK(report.feasible);
    }

    FrontSet filtered = front.filtered_nondominated(1e-6);
    std::vector<Vector> fs;
    for (const FrontEntry& entry : filtered.entries) fs.push_back(entry.f);
    const std::vector<int> keep = nondominance_filter(fs, 1e-6);
    CHECK(keep.size() == fs.size());
}
