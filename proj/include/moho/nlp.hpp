#pragma once

#include <functional>
#include <string>
#include <vector>

#include "moho/problem.hpp"
#include "moho/types.hpp"

namespace moho {

/// Smooth scalar term of an NLP: value and gradient required, Hessian
/// optional (finite differences of the gradient otherwise).
struct NlpFunction {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    std::function<Matrix(const Vector&)> hessian;  // may be empty
};

struct NlpSpec {
    NlpFunction objective;
    std::vector<NlpFunction> ineq;  // <= 0 convention
    std::vector<NlpFunction> eq;    // = 0 convention
    Vector x0;
    double tol_opt = 1e-8;
    double tol_feas = 1e-8;
    int max_iter = 500;   // cap on cumulative inner iterations
    double rho0 = 10.0;   // initial penalty; raise for nearly degenerate stages
};

enum class NlpStatus { optimal, max_iter, infeasible };

const char* to_string(NlpStatus status);

struct NlpResult {
    Vector x;
    double objective = 0.0;
    Vector ineq_multipliers;  // >= 0
    Vector eq_multipliers;
    double kkt_residual = 0.0;
    double max_ineq_violation = 0.0;  // max(g_i)^+
    double max_eq_violation = 0.0;    // max |h_j|
    NlpStatus status = NlpStatus::max_iter;
    int iterations = 0;  // inner iterations consumed
};

/// Local solve of min f(x) s.t. g <= 0, h = 0 by an augmented Lagrangian
/// outer loop with damped-Newton inner minimization. Deterministic for fixed
/// inputs. Evaluation counting flows through the closures in the spec.
NlpResult minimize_constrained(const NlpSpec& spec);

/// Nearest feasible point: min ||z - x0||^2 s.t. g(z) <= 0, h(z) = 0.
NlpResult project_to_feasible(const ProblemDefinition& problem, const Vector& x0,
                              EvalCounters& counters);

}  // namespace moho
