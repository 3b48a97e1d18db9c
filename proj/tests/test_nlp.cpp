#include <doctest.h>

#include <random>

#include "moho/nlp.hpp"
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

NlpFunction quadratic_objective() {
    return {
        [](const Vector& x) { return x[0] * x[0]; },
        [](const Vector& x) -> Vector { return vec({2.0 * x[0]}); },
        [](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(1, 1); },
    };
}

}  // namespace

TEST_CASE("scalar quadratic with an active bound: x*=1, multiplier 2") {
    NlpSpec spec;
    spec.objective = quadratic_objective();
    spec.ineq.push_back(NlpFunction{
        [](const Vector& x) { return -x[0] + 1.0; },
        [](const Vector&) -> Vector { return vec({-1.0}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); },
    });
    spec.x0 = vec({5});

    NlpResult result = minimize_constrained(spec);
    CHECK(result.status == NlpStatus::optimal);
    CHECK(result.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(result.ineq_multipliers[0] == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("projection onto a line: x*=(0.5, 0.5)") {
    NlpSpec spec;
    spec.objective = {
        [](const Vector& x) { return x.squaredNorm(); },
        [](const Vector& x) -> Vector { return 2.0 * x; },
        [](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(2, 2); },
    };
    spec.eq.push_back(NlpFunction{
        [](const Vector& x) { return x[0] + x[1] - 1.0; },
        [](const Vector&) -> Vector { return vec({1, 1}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(2, 2); },
    });
    spec.x0 = vec({0, 0});

    NlpResult result = minimize_constrained(spec);
    CHECK(result.status == NlpStatus::optimal);
    CHECK(result.x[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(result.x[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("weighted benchmark objective lands on the tabulated point") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    EvalCounters counters(2);

    auto shared_counters = &counters;
    NlpSpec spec;
    spec.objective = {
        [&five, shared_counters](const Vector& x) {
            const Vector f = evaluate_objectives(five, x, *shared_counters);
            return 0.4 * f[0] + 0.6 * f[1];
        },
        [&five, shared_counters](const Vector& x) -> Vector {
            const ProblemJacobians jac = jacobians(five, x, *shared_counters);
            return jac.f.transpose() * vec({0.4, 0.6});
        },
        [&five, shared_counters](const Vector& x) -> Matrix {
            const ProblemHessians hes = hessians(five, x, *shared_counters);
            return 0.4 * hes.f[0] + 0.6 * hes.f[1];
        },
    };
    for (int j = 0; j < five.m(); ++j) {
        spec.ineq.push_back(NlpFunction{
            [&five, j](const Vector& x) { return five.ineq_constraints()[j].value(x); },
            [&five, j](const Vector& x) -> Vector { return five.ineq_constraints()[j].gradient(x); },
            [&five, j](const Vector& x) -> Matrix { return five.ineq_constraints()[j].hessian(x); },
        });
    }
    for (int k = 0; k < five.s(); ++k) {
        spec.eq.push_back(NlpFunction{
            [&five, k](const Vector& x) { return five.eq_constraints()[k].value(x); },
            [&five, k](const Vector& x) -> Vector { return five.eq_constraints()[k].gradient(x); },
            [&five, k](const Vector& x) -> Matrix { return five.eq_constraints()[k].hessian(x); },
        });
    }
    spec.x0 = vec({1, 2, 0, 1, 1});

    NlpResult result = minimize_constrained(spec);
    REQUIRE(result.status == NlpStatus::optimal);
    const Vector target = vec({-0.1385, -0.0508, -0.5301, -0.4175, 1.5012});
    CHECK((result.x - target).cwiseAbs().maxCoeff() < 2e-2);

    const Vector f = evaluate_objectives(five, result.x, counters);
    CHECK(std::abs(f[0] - 2.7308) < 2e-2);
    CHECK(std::abs(f[1] - (-0.4110)) < 2e-2);

    // Multiplier sign, complementarity and stationarity at optimal status.
    CHECK(result.ineq_multipliers.minCoeff() >= -1e-10);
    auto [g, h] = evaluate_constraints(five, result.x, counters);
    for (int i = 0; i < five.m(); ++i) {
        CHECK(std::abs(result.ineq_multipliers[i] * g[i]) <= 1e-6);
    }
    CHECK(result.kkt_residual <= 1e-8);
}

TEST_CASE("project_to_feasible") {
    const ProblemDefinition& five = get_problem("ex2_5d");
    const ProblemDefinition& two = get_problem("ex1_2d");
    EvalCounters counters(2);

    SUBCASE("feasible input projects to itself") {
        const Vector x0 = vec({-2, 0, 0, 0, 4});
        NlpResult result = project_to_feasible(five, x0, counters);
        CHECK(result.status == NlpStatus::optimal);
        CHECK((result.x - x0).norm() <= 1e-6);
    }

    SUBCASE("infeasible 2d start becomes feasible") {
        NlpResult result = project_to_feasible(two, vec({0, 0}), counters);
        CHECK(result.status == NlpStatus::optimal);
        auto [g, h] = evaluate_constraints(two, result.x, counters);
        CHECK(g[0] <= 1e-8);
        CHECK(std::abs(h[0]) <= 1e-6);
    }

    SUBCASE("projection is the closest sampled feasible point") {
        const Vector x0 = vec({1, 2, 0, 1, 1});
        NlpResult result = project_to_feasible(five, x0, counters);
        REQUIRE(result.status == NlpStatus::optimal);
        CHECK(result.max_eq_violation <= 1e-6);

        PointCloud cloud = projected_cloud(five, five.sampling_box(), 200, 99, counters);
        const double dist = (result.x - x0).norm();
        for (const CloudPoint& point : cloud.points) {
            CHECK(dist <= (point.x - x0).norm() + 1e-6);
        }
    }

    SUBCASE("idempotence on its own output") {
        NlpResult once = project_to_feasible(five, vec({3, -2, 1, 0, 2}), counters);
        REQUIRE(once.status == NlpStatus::optimal);
        NlpResult twice = project_to_feasible(five, once.x, counters);
        CHECK((twice.x - once.x).norm() <= 1e-8);
    }

    SUBCASE("unconstrained problems are rejected") {
        std::vector<ScalarFunction> objectives(1);
        objectives[0].value = [](const Vector& x) { return x[0]; };
        ProblemDefinition free("free", 1, 1, 0, 0, objectives, {}, {},
                               Box{vec({-1}), vec({1})});
        CHECK_THROWS_AS(project_to_feasible(free, vec({0}), counters), std::invalid_argument);
    }
}

TEST_CASE("infeasible subproblem is detected") {
    NlpSpec spec;
    spec.objective = quadratic_objective();
    // x <= -1 and x >= 1 cannot hold together.
    spec.ineq.push_back(NlpFunction{
        [](const Vector& x) { return x[0] + 1.0; },
        [](const Vector&) -> Vector { return vec({1.0}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); },
    });
    spec.ineq.push_back(NlpFunction{
        [](const Vector& x) { return -x[0] + 1.0; },
        [](const Vector&) -> Vector { return vec({-1.0}); },
        [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); },
    });
    spec.x0 = vec({0});
    spec.max_iter = 2000;

    NlpResult result = minimize_constrained(spec);
    CHECK(result.status == NlpStatus::infeasible);
}

TEST_CASE("determinism: identical specs give identical iterates") {
    const ProblemDefinition& two = get_problem("ex1_2d");
    EvalCounters c1(2), c2(2);
    NlpResult a = project_to_feasible(two, vec({0.3, -0.7}), c1);
    NlpResult b = project_to_feasible(two, vec({0.3, -0.7}), c2);
    CHECK(a.x == b.x);
    CHECK(a.iterations == b.iterations);
}
