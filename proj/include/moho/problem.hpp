#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moho/types.hpp"

namespace moho {

/// A scalar function of x with optional analytic gradient and Hessian.
/// Missing providers fall back to central finite differences.
struct ScalarFunction {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;  // may be empty
    std::function<Matrix(const Vector&)> hessian;   // may be empty
};

/// Per-coordinate bounds used for sampling and NSGA-II initialization only;
/// they are not constraints of the problem.
struct Box {
    Vector lower;
    Vector upper;
};

class ProblemDefinition {
public:
    ProblemDefinition(std::string name, int n, int p, int m, int s,
                      std::vector<ScalarFunction> objectives,
                      std::vector<ScalarFunction> ineq_constraints,
                      std::vector<ScalarFunction> eq_constraints,
                      Box sampling_box);

    const std::string& name() const { return name_; }
    int n() const { return n_; }
    int p() const { return p_; }
    int m() const { return m_; }
    int s() const { return s_; }

    const std::vector<ScalarFunction>& objectives() const { return objectives_; }
    const std::vector<ScalarFunction>& ineq_constraints() const { return ineq_constraints_; }
    const std::vector<ScalarFunction>& eq_constraints() const { return eq_constraints_; }
    const Box& sampling_box() const { return sampling_box_; }

    /// True when every objective and constraint carries analytic gradient and
    /// Hessian providers (no finite-difference fallback anywhere).
    bool has_analytic_derivatives() const;

private:
    std::string name_;
    int n_, p_, m_, s_;
    std::vector<ScalarFunction> objectives_;
    std::vector<ScalarFunction> ineq_constraints_;
    std::vector<ScalarFunction> eq_constraints_;
    Box sampling_box_;
};

/// Evaluation counts accumulated over a run. Counters from independent runs
/// are summable; merging is plain addition.
struct EvalCounters {
    std::vector<std::int64_t> objective;  // one slot per objective
    std::int64_t constraints = 0;         // joint (g, h) block evaluations
    std::int64_t gradients = 0;
    std::int64_t hessians = 0;
    std::int64_t homotopy = 0;
    std::int64_t homotopy_jacobian = 0;

    EvalCounters() = default;
    explicit EvalCounters(int p) : objective(static_cast<std::size_t>(p), 0) {}

    EvalCounters& operator+=(const EvalCounters& other);

    std::int64_t max_objective() const;
};

struct FeasibilityReport {
    Vector g_values;
    Vector h_values;
    bool g_ok = true;
    bool h_ok = true;
    bool feasible = true;
    std::vector<int> active_set;  // indices i with |g_i| <= tol_active (0-based)
};

/// Default solver-grade tolerances; figure scans use much looser ones.
inline constexpr double kDefaultTolG = 1e-8;
inline constexpr double kDefaultTolH = 1e-6;
inline constexpr double kDefaultTolActive = 1e-6;

Vector evaluate_objectives(const ProblemDefinition& problem, const Vector& x,
                           EvalCounters& counters);

/// Evaluates a single objective, incrementing only that objective's counter.
double evaluate_objective(const ProblemDefinition& problem, int index, const Vector& x,
                          EvalCounters& counters);

std::pair<Vector, Vector> evaluate_constraints(const ProblemDefinition& problem,
                                               const Vector& x, EvalCounters& counters);

struct ProblemJacobians {
    Matrix f;  // p x n, rows are objective gradients
    Matrix g;  // m x n
    Matrix h;  // s x n
};

ProblemJacobians jacobians(const ProblemDefinition& problem, const Vector& x,
                           EvalCounters& counters);

struct ProblemHessians {
    std::vector<Matrix> f;
    std::vector<Matrix> g;
    std::vector<Matrix> h;
    bool used_fallback = false;  // true when any Hessian came from finite differences
};

ProblemHessians hessians(const ProblemDefinition& problem, const Vector& x,
                         EvalCounters& counters);

FeasibilityReport feasibility_report(const ProblemDefinition& problem, const Vector& x,
                                     EvalCounters& counters,
                                     double tol_g = kDefaultTolG,
                                     double tol_h = kDefaultTolH,
                                     double tol_active = kDefaultTolActive);

/// Central finite-difference gradient with step 1e-6 scaled by 1 + |x_i|.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x);

/// Central finite differences of a gradient; result is symmetrized.
Matrix fd_hessian(const std::function<Vector(const Vector&)>& grad, const Vector& x);

}  // namespace moho
