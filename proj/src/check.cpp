#include "moho/check.hpp"

#include <cmath>

#include "moho/registry.hpp"

namespace moho {

namespace {

struct ReferencePoint {
    std::string name;
    Vector x;
    double f1, f2, h1, h2, g;
    bool feasible_at_1e3;
};

Vector vec5(double a, double b, double c, double d, double e) {
    Vector v(5);
    v << a, b, c, d, e;
    return v;
}

}  // namespace

CheckReport literature_check(EvalCounters& counters) {
    const ProblemDefinition& pb = get_problem("ex2_5d");
    constexpr double kTol = 1e-3;

    const std::vector<ReferencePoint> points = {
        {"shang2011", vec5(0.3077, 0.5374, -0.2703, -0.1336, 0.2804),
         0.5530, 2.0873, -0.1011, 0.0, -9.5256, false},
        {"zhao2012", vec5(-1.3074, -2.8605, -1.0470, 0.4103, 0.4475),
         11.3566, -9.2942, 1.08e-4, -7.7391, 1.1563, false},
        {"homotopy", vec5(0.3214, 0.5131, -0.2773, -0.1405, 0.3048),
         0.5561, 2.0819, -2.0e-4, 0.0, -9.5368, true},
    };

    CheckReport report;
    for (const ReferencePoint& point : points) {
        const Vector f = evaluate_objectives(pb, point.x, counters);
        const auto [g, h] = evaluate_constraints(pb, point.x, counters);

        auto push = [&](const std::string& quantity, double expected, double actual) {
            CheckCell cell{point.name, quantity, expected, actual, kTol,
                           std::abs(expected - actual) <= kTol};
            report.all_pass = report.all_pass && cell.pass;
            report.cells.push_back(std::move(cell));
        };
        push("f1", point.f1, f[0]);
        push("f2", point.f2, f[1]);
        push("h1", point.h1, h[0]);
        push("h2", point.h2, h[1]);
        push("g", point.g, g[0]);

        const bool feasible = std::abs(h[0]) <= kTol && std::abs(h[1]) <= kTol && g[0] <= kTol;
        report.feasibility.emplace_back(point.name, feasible);
        if (feasible != point.feasible_at_1e3) report.all_pass = false;
    }
    return report;
}

}  // namespace moho
