#include <doctest.h>

#include <random>

#include "moho/registry.hpp"
#include "moho/sampling.hpp"
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

TEST_CASE("scan retention is monotone in eps at a fixed seed") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    const std::uint64_t seed = 2024;
    const std::int64_t count = 20000;

    const auto small = uniform_feasibility_scan(five, five.sampling_box(), count, 0.01, seed,
                                                counters);
    const auto mid = uniform_feasibility_scan(five, five.sampling_box(), count, 0.1, seed,
                                              counters);
    const auto large = uniform_feasibility_scan(five, five.sampling_box(), count, 1.0, seed,
                                                counters);
    CHECK(small.points.size() <= mid.points.size());
    CHECK(mid.points.size() <= large.points.size());
    CHECK(small.attempted == count);
    CHECK(small.method == "uniform-filter");

    // Near-feasible fraction stays tiny even at the loose tolerance.
    CHECK(static_cast<double>(large.points.size()) / count < 0.05);
}

TEST_CASE("vacuous filter retains every sample") {
    std::vector<ScalarFunction> objectives(1);
    objectives[0] = {
        [](const Vector& x) { return x[0]; },
        [](const Vector&) -> Vector { return vec({1.0}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); },
    };
    std::vector<ScalarFunction> ineq(1);
    ineq[0] = {
        [](const Vector&) { return -1.0; },  // g == -1 everywhere
        [](const Vector&) -> Vector { return vec({0.0}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); },
    };
    ProblemDefinition trivial("trivial", 1, 1, 1, 0, objectives, ineq, {},
                              Box{vec({-1}), vec({1})});
    EvalCounters counters(1);
    const auto cloud = uniform_feasibility_scan(trivial, trivial.sampling_box(), 500,
                                                std::numeric_limits<double>::infinity(), 9,
                                                counters);
    CHECK(cloud.points.size() == 500);
}

TEST_CASE("scan argument validation") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    CHECK_THROWS_AS(uniform_feasibility_scan(five, five.sampling_box(), 0, 0.1, 1, counters),
                    std::invalid_argument);
    CHECK_THROWS_AS(uniform_feasibility_scan(five, five.sampling_box(), 10, 0.0, 1, counters),
                    std::invalid_argument);
}

TEST_CASE("projected cloud retains nearly every sample") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);
    const auto cloud = projected_cloud(five, five.sampling_box(), 1000, 77, counters);
    CHECK(cloud.points.size() >= 900);
    CHECK(cloud.method == "projection");
    for (const CloudPoint& point : cloud.points) {
        CHECK(point.feasibility.h_values.cwiseAbs().maxCoeff() <= 1e-6);
        CHECK(point.feasibility.g_values.maxCoeff() <= 1e-8);
    }
}

TEST_CASE("grid scan on the 2-variable benchmark, registered convention") {
    const ProblemDefinition& two = get_problem("ex1_2d");
    const BenchPreset& preset = get_preset("ex1_2d");
    EvalCounters counters(2);
    // A coarse grid keeps the unit test quick; the acceptance suite runs the
    // registered 4000x4000 grid.
    const auto cloud = grid_feasibility_scan(two, two.sampling_box(), {400, 400},
                                             preset.grid_eps * 10.0, counters);
    CHECK(cloud.attempted == 160000);
    CHECK(cloud.method == "grid");
    CHECK(cloud.points.size() > 0);
    for (const CloudPoint& point : cloud.points) {
        CHECK(std::abs(point.x[0] + std::pow(point.x[1], 4)) <= preset.grid_eps * 10.0);
    }
}

TEST_CASE("nondominance filter") {
    SUBCASE("incomparable pair is kept") {
        const std::vector<Vector> fs = {vec({1, 2}), vec({2, 1})};
        CHECK(nondominance_filter(fs, 1e-6) == std::vector<int>{0, 1});
    }
    SUBCASE("strictly dominated point is dropped") {
        const std::vector<Vector> fs = {vec({1, 1}), vec({2, 2})};
        CHECK(nondominance_filter(fs, 1e-6) == std::vector<int>{0});
    }
    SUBCASE("filter is idempotent and matches brute force on random sets") {
        std::mt19937_64 rng(53);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Vector> fs;
            for (int i = 0; i < 50; ++i) fs.push_back(testing::random_vector(rng, 2, 0.0, 1.0));
            const std::vector<int> keep = nondominance_filter(fs, 1e-6);
            CHECK(keep == testing::brute_force_filter(fs, 1e-6));

            std::vector<Vector> survivors;
            for (int idx : keep) survivors.push_back(fs[static_cast<std::size_t>(idx)]);
            const std::vector<int> again = nondominance_filter(survivors, 1e-6);
            CHECK(static_cast<int>(again.size()) == static_cast<int>(survivors.size()));
        }
    }
}

TEST_CASE("metrics aggregation") {
    SUBCASE("empty input gives empty output") {
        CHECK(metrics_report({}).empty());
    }

    SUBCASE("same-method reports sum their counters") {
        SolveReport a, b;
        a.method = b.method = "wsm";
        a.counters = EvalCounters(2);
        b.counters = EvalCounters(2);
        a.counters.objective = {10, 12};
        b.counters.objective = {5, 5};
        a.counters.constraints = 7;
        b.counters.constraints = 3;
        a.wall_seconds = 0.25;
        b.wall_seconds = 0.5;
        const auto rows = metrics_report({a, b});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].objective_evals[0] == 15);
        CHECK(rows[0].objective_evals[1] == 17);
        CHECK(rows[0].constraint_evals == 10);
        CHECK(rows[0].wall_seconds == doctest::Approx(0.75));
        CHECK_FALSE(rows[0].homotopy_convention);
    }

    SUBCASE("homotopy rows flag the asterisk convention") {
        SolveReport h;
        h.method = "homotopy";
        h.counters = EvalCounters(2);
        h.counters.homotopy = 123;
        h.counters.homotopy_jacobian = 45;
        const auto rows = metrics_report({h});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].homotopy_convention);
        CHECK(rows[0].homotopy_evals == 123);
        CHECK(rows[0].homotopy_jacobian_evals == 45);
    }
}

TEST_CASE("dominance helper") {
    const std::vector<Vector> cloud = {vec({1, 1}), vec({0.5, 3})};
    CHECK(dominated_by_any(vec({2, 2}), cloud, 1e-3));
    CHECK_FALSE(dominated_by_any(vec({0.9, 1.2}), cloud, 1e-3));
    CHECK_FALSE(dominated_by_any(vec({1, 1}), cloud, 1e-3));  // equal is not dominated
}
