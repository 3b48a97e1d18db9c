#include "moho/registry.hpp"

#include <map>
#include <sstream>

namespace moho {

namespace {

Vector vec(std::initializer_list<double> vals) {
    Vector v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

// Two quadratic-ish objectives on R^5 with one ball inequality (over the
// first four coordinates) and two equality constraints.
ProblemDefinition make_ball_constrained_5d() {
    std::vector<ScalarFunction> objectives(2);
    objectives[0] = {
        [](const Vector& x) { return x.squaredNorm(); },
        [](const Vector& x) -> Vector { return 2.0 * x; },
        [](const Vector& x) -> Matrix { return 2.0 * Matrix::Identity(x.size(), x.size()); },
    };
    objectives[1] = {
        [](const Vector& x) {
            const double d = x[3] - x[4];
            return 3.0 * x[0] + 2.0 * x[1] - x[2] / 3.0 + 0.01 * d * d * d;
        },
        [](const Vector& x) -> Vector {
            const double d = x[3] - x[4];
            Vector g(5);
            g << 3.0, 2.0, -1.0 / 3.0, 0.03 * d * d, -0.03 * d * d;
            return g;
        },
        [](const Vector& x) -> Matrix {
            const double d = 0.06 * (x[3] - x[4]);
            Matrix hess = Matrix::Zero(5, 5);
            hess(3, 3) = d;
            hess(4, 4) = d;
            hess(3, 4) = -d;
            hess(4, 3) = -d;
            return hess;
        },
    };

    std::vector<ScalarFunction> ineq(1);
    ineq[0] = {
        [](const Vector& x) {
            return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - 10.0;
        },
        [](const Vector& x) -> Vector {
            Vector g(5);
            g << 2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 2.0 * x[3], 0.0;
            return g;
        },
        [](const Vector&) -> Matrix {
            Vector d(5);
            d << 2.0, 2.0, 2.0, 2.0, 0.0;
            return d.asDiagonal();
        },
    };

    std::vector<ScalarFunction> eq(2);
    eq[0] = {
        [](const Vector& x) {
            return 4.0 * x[0] - 2.0 * x[1] + 0.8 * x[2] + 0.6 * x[3] + 0.5 * x[4] * x[4];
        },
        [](const Vector& x) -> Vector {
            Vector g(5);
            g << 4.0, -2.0, 0.8, 0.6, x[4];
            return g;
        },
        [](const Vector&) -> Matrix {
            Matrix hess = Matrix::Zero(5, 5);
            hess(4, 4) = 1.0;
            return hess;
        },
    };
    eq[1] = {
        [](const Vector& x) { return x[0] + 2.0 * x[1] - x[2] - 0.5 * x[3] + x[4] - 2.0; },
        [](const Vector&) -> Vector {
            Vector g(5);
            g << 1.0, 2.0, -1.0, -0.5, 1.0;
            return g;
        },
        [](const Vector&) -> Matrix { return Matrix::Zero(5, 5); },
    };

    Box box{Vector::Constant(5, -5.0), Vector::Constant(5, 5.0)};
    return ProblemDefinition("ex2_5d", 5, 2, 1, 2, std::move(objectives), std::move(ineq),
                             std::move(eq), std::move(box));
}

// Two objectives on R^2 with a parabolic inequality and a quartic equality.
ProblemDefinition make_quartic_curve_2d() {
    std::vector<ScalarFunction> objectives(2);
    objectives[0] = {
        [](const Vector& x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; },
        [](const Vector& x) -> Vector {
            Vector g(2);
            g << 2.0 * x[0], 4.0 * x[1];
            return g;
        },
        [](const Vector&) -> Matrix {
            Matrix hess(2, 2);
            hess << 2.0, 0.0, 0.0, 4.0;
            return hess;
        },
    };
    objectives[1] = {
        [](const Vector& x) { return -3.0 * x[0] + x[1] * x[1] - x[0] * x[1]; },
        [](const Vector& x) -> Vector {
            Vector g(2);
            g << -3.0 - x[1], 2.0 * x[1] - x[0];
            return g;
        },
        [](const Vector&) -> Matrix {
            Matrix hess(2, 2);
            hess << 0.0, -1.0, -1.0, 2.0;
            return hess;
        },
    };

    std::vector<ScalarFunction> ineq(1);
    ineq[0] = {
        [](const Vector& x) { return x[0] * x[0] - 5.0 * x[1] + 3.0; },
        [](const Vector& x) -> Vector {
            Vector g(2);
            g << 2.0 * x[0], -5.0;
            return g;
        },
        [](const Vector&) -> Matrix {
            Matrix hess(2, 2);
            hess << 2.0, 0.0, 0.0, 0.0;
            return hess;
        },
    };

    std::vector<ScalarFunction> eq(1);
    eq[0] = {
        [](const Vector& x) { return x[0] + x[1] * x[1] * x[1] * x[1]; },
        [](const Vector& x) -> Vector {
            Vector g(2);
            g << 1.0, 4.0 * x[1] * x[1] * x[1];
            return g;
        },
        [](const Vector& x) -> Matrix {
            Matrix hess = Matrix::Zero(2, 2);
            hess(1, 1) = 12.0 * x[1] * x[1];
            return hess;
        },
    };

    Box box{vec({-4.0, -2.0}), vec({4.0, 2.0})};
    return ProblemDefinition("ex1_2d", 2, 2, 1, 1, std::move(objectives), std::move(ineq),
                             std::move(eq), std::move(box));
}

BenchPreset make_preset_5d() {
    BenchPreset preset;
    preset.scalarization_x0 = vec({1, 2, 0, 1, 1});
    preset.homotopy_x0 = vec({1, 2, 0, 1, 1});
    preset.homotopy_u0 = vec({1});
    preset.weights = vec({0.4, 0.6});
    preset.alternate_starts = {vec({1, 2, 0, 1, 1}), vec({0.5, 0.5, 0.5, 0.5, 0.5}),
                               vec({-2, 0, 0, 0, 4}), vec({0.4, 0.8, 0, 0, 0})};
    preset.alternate_weights = {vec({0.96, 0.04})};
    preset.epsilon_primary = 0;
    preset.epsilon_bound = -0.4;
    preset.lex_order = {0, 1};
    preset.nsga_population = 100;
    preset.nsga_generations = 200;
    preset.nsga_eq_tolerance = 0.1;
    preset.seed = 7;
    return preset;
}

BenchPreset make_preset_2d() {
    BenchPreset preset;
    preset.scalarization_x0 = vec({0, 0});
    preset.homotopy_x0 = vec({-1, 1});  // registered start must satisfy g < 0
    preset.homotopy_u0 = vec({1});
    preset.weights = vec({0.5, 0.5});
    preset.alternate_starts = {vec({-1, 1})};
    preset.epsilon_primary = 0;
    preset.epsilon_bound = 0.9;
    preset.lex_order = {0, 1};
    preset.nsga_population = 100;
    preset.nsga_generations = 200;
    preset.nsga_eq_tolerance = 1e-2;
    preset.seed = 42;
    preset.grid_counts = {4000, 4000};
    preset.grid_eps = 0.009;
    return preset;
}

struct Registry {
    std::map<std::string, ProblemDefinition> problems;
    std::map<std::string, BenchPreset> presets;

    Registry() {
        problems.emplace("ex2_5d", make_ball_constrained_5d());
        problems.emplace("ex1_2d", make_quartic_curve_2d());
        presets.emplace("ex2_5d", make_preset_5d());
        presets.emplace("ex1_2d", make_preset_2d());
    }
};

const Registry& registry() {
    static const Registry instance;
    return instance;
}

}  // namespace

const ProblemDefinition& get_problem(const std::string& name) {
    const auto& problems = registry().problems;
    auto it = problems.find(name);
    if (it == problems.end()) {
        std::ostringstream msg;
        msg << "unknown problem '" << name << "'; available:";
        for (const auto& [key, _] : problems) msg << " " << key;
        throw std::invalid_argument(msg.str());
    }
    return it->second;
}

const BenchPreset& get_preset(const std::string& name) {
    const auto& presets = registry().presets;
    auto it = presets.find(name);
    if (it == presets.end()) {
        throw std::invalid_argument("no bench preset registered for '" + name + "'");
    }
    return it->second;
}

std::vector<std::string> problem_names() {
    std::vector<std::string> names;
    for (const auto& [key, _] : registry().problems) names.push_back(key);
    return names;
}

}  // namespace moho
