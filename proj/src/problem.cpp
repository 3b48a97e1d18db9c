#include "moho/problem.hpp"

#include <cmath>
#include <sstream>

namespace moho {

namespace {

void ensure_dimension(const Vector& x, int n, const char* where) {
    if (static_cast<int>(x.size()) != n) {
        std::ostringstream msg;
        msg << where << ": expected vector of length " << n << ", got " << x.size();
        throw std::invalid_argument(msg.str());
    }
}

void ensure_finite(const Vector& values, const char* what) {
    for (int i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            std::ostringstream msg;
            msg << what << " returned non-finite value at index " << i;
            throw std::runtime_error(msg.str());
        }
    }
}

}  // namespace

ProblemDefinition::ProblemDefinition(std::string name, int n, int p, int m, int s,
                                     std::vector<ScalarFunction> objectives,
                                     std::vector<ScalarFunction> ineq_constraints,
                                     std::vector<ScalarFunction> eq_constraints,
                                     Box sampling_box)
    : name_(std::move(name)),
      n_(n),
      p_(p),
      m_(m),
      s_(s),
      objectives_(std::move(objectives)),
      ineq_constraints_(std::move(ineq_constraints)),
      eq_constraints_(std::move(eq_constraints)),
      sampling_box_(std::move(sampling_box)) {
    if (n_ < 1 || p_ < 1 || m_ < 0 || s_ < 0) {
        throw std::invalid_argument("problem dimensions must satisfy n>=1, p>=1, m>=0, s>=0");
    }
    if (static_cast<int>(objectives_.size()) != p_ ||
        static_cast<int>(ineq_constraints_.size()) != m_ ||
        static_cast<int>(eq_constraints_.size()) != s_) {
        throw std::invalid_argument("function list sizes do not match declared dimensions");
    }
    if (sampling_box_.lower.size() != n_ || sampling_box_.upper.size() != n_) {
        throw std::invalid_argument("sampling box must have one bound pair per coordinate");
    }
    for (int i = 0; i < n_; ++i) {
        if (!(sampling_box_.lower[i] < sampling_box_.upper[i])) {
            throw std::invalid_argument("sampling box requires lower < upper componentwise");
        }
    }
}

bool ProblemDefinition::has_analytic_derivatives() const {
    auto complete = [](const std::vector<ScalarFunction>& fns) {
        for (const auto& fn : fns) {
            if (!fn.gradient || !fn.hessian) return false;
        }
        return true;
    };
    return complete(objectives_) && complete(ineq_constraints_) && complete(eq_constraints_);
}

EvalCounters& EvalCounters::operator+=(const EvalCounters& other) {
    if (objective.size() < other.objective.size()) {
        objective.resize(other.objective.size(), 0);
    }
    for (std::size_t i = 0; i < other.objective.size(); ++i) {
        objective[i] += other.objective[i];
    }
    constraints += other.constraints;
    gradients += other.gradients;
    hessians += other.hessians;
    homotopy += other.homotopy;
    homotopy_jacobian += other.homotopy_jacobian;
    return *this;
}

std::int64_t EvalCounters::max_objective() const {
    std::int64_t best = 0;
    for (auto c : objective) best = std::max(best, c);
    return best;
}

Vector evaluate_objectives(const ProblemDefinition& problem, const Vector& x,
                           EvalCounters& counters) {
    ensure_dimension(x, problem.n(), "evaluate_objectives");
    if (counters.objective.size() < static_cast<std::size_t>(problem.p())) {
        counters.objective.resize(static_cast<std::size_t>(problem.p()), 0);
    }
    Vector f(problem.p());
    for (int i = 0; i < problem.p(); ++i) {
        f[i] = problem.objectives()[static_cast<std::size_t>(i)].value(x);
        ++counters.objective[static_cast<std::size_t>(i)];
    }
    ensure_finite(f, "objective");
    return f;
}

double evaluate_objective(const ProblemDefinition& problem, int index, const Vector& x,
                          EvalCounters& counters) {
    ensure_dimension(x, problem.n(), "evaluate_objective");
    if (index < 0 || index >= problem.p()) {
        throw std::invalid_argument("objective index out of range");
    }
    if (counters.objective.size() < static_cast<std::size_t>(problem.p())) {
        counters.objective.resize(static_cast<std::size_t>(problem.p()), 0);
    }
    double v = problem.objectives()[static_cast<std::size_t>(index)].value(x);
    ++counters.objective[static_cast<std::size_t>(index)];
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "objective returned non-finite value at index " << index;
        throw std::runtime_error(msg.str());
    }
    return v;
}

std::pair<Vector, Vector> evaluate_constraints(const ProblemDefinition& problem,
                                               const Vector& x, EvalCounters& counters) {
    ensure_dimension(x, problem.n(), "evaluate_constraints");
    Vector g(problem.m());
    Vector h(problem.s());
    for (int j = 0; j < problem.m(); ++j) {
        g[j] = problem.ineq_constraints()[static_cast<std::size_t>(j)].value(x);
    }
    for (int k = 0; k < problem.s(); ++k) {
        h[k] = problem.eq_constraints()[static_cast<std::size_t>(k)].value(x);
    }
    ++counters.constraints;  // one joint (g, h) evaluation
    ensure_finite(g, "inequality constraint");
    ensure_finite(h, "equality constraint");
    return {g, h};
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x) {
    Vector g(x.size());
    Vector xp = x, xm = x;
    for (int i = 0; i < x.size(); ++i) {
        const double step = 1e-6 * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        g[i] = (f(xp) - f(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

Matrix fd_hessian(const std::function<Vector(const Vector&)>& grad, const Vector& x) {
    const int n = static_cast<int>(x.size());
    Matrix hess(n, n);
    Vector xp = x, xm = x;
    for (int i = 0; i < n; ++i) {
        const double step = 1e-6 * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        hess.col(i) = (grad(xp) - grad(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return 0.5 * (hess + hess.transpose());
}

ProblemJacobians jacobians(const ProblemDefinition& problem, const Vector& x,
                           EvalCounters& counters) {
    ensure_dimension(x, problem.n(), "jacobians");
    const int n = problem.n();
    ProblemJacobians out;
    out.f.resize(problem.p(), n);
    out.g.resize(problem.m(), n);
    out.h.resize(problem.s(), n);

    auto row_of = [&](const ScalarFunction& fn) -> Vector {
        Vector g = fn.gradient ? fn.gradient(x) : fd_gradient(fn.value, x);
        ensure_dimension(g, n, "gradient provider");
        return g;
    };
    for (int i = 0; i < problem.p(); ++i) {
        out.f.row(i) = row_of(problem.objectives()[static_cast<std::size_t>(i)]);
    }
    for (int j = 0; j < problem.m(); ++j) {
        out.g.row(j) = row_of(problem.ineq_constraints()[static_cast<std::size_t>(j)]);
    }
    for (int k = 0; k < problem.s(); ++k) {
        out.h.row(k) = row_of(problem.eq_constraints()[static_cast<std::size_t>(k)]);
    }
    ++counters.gradients;
    return out;
}

ProblemHessians hessians(const ProblemDefinition& problem, const Vector& x,
                         EvalCounters& counters) {
    ensure_dimension(x, problem.n(), "hessians");
    const int n = problem.n();
    ProblemHessians out;

    auto hess_of = [&](const ScalarFunction& fn, const char* what) -> Matrix {
        if (fn.hessian) {
            Matrix hess = fn.hessian(x);
            if (hess.rows() != n || hess.cols() != n) {
                throw std::invalid_argument("Hessian provider returned wrong dimensions");
            }
            const double asym = (hess - hess.transpose()).cwiseAbs().maxCoeff();
            if (asym > 1e-10) {
                std::ostringstream msg;
                msg << what << ": analytic Hessian asymmetric by " << asym;
                throw std::runtime_error(msg.str());
            }
            return hess;
        }
        out.used_fallback = true;
        if (fn.gradient) return fd_hessian(fn.gradient, x);
        return fd_hessian([&fn](const Vector& y) { return fd_gradient(fn.value, y); }, x);
    };

    out.f.reserve(static_cast<std::size_t>(problem.p()));
    out.g.reserve(static_cast<std::size_t>(problem.m()));
    out.h.reserve(static_cast<std::size_t>(problem.s()));
    for (const auto& fn : problem.objectives()) out.f.push_back(hess_of(fn, "objective"));
    for (const auto& fn : problem.ineq_constraints()) out.g.push_back(hess_of(fn, "inequality"));
    for (const auto& fn : problem.eq_constraints()) out.h.push_back(hess_of(fn, "equality"));
    ++counters.hessians;
    return out;
}

FeasibilityReport feasibility_report(const ProblemDefinition& problem, const Vector& x,
                                     EvalCounters& counters, double tol_g, double tol_h,
                                     double tol_active) {
    if (tol_g <= 0 || tol_h <= 0 || tol_active <= 0) {
        throw std::invalid_argument("feasibility tolerances must be positive");
    }
    auto [g, h] = evaluate_constraints(problem, x, counters);
    FeasibilityReport report;
    report.g_values = g;
    report.h_values = h;
    report.g_ok = true;
    for (int j = 0; j < g.size(); ++j) {
        if (g[j] > tol_g) report.g_ok = false;
        if (std::abs(g[j]) <= tol_active) report.active_set.push_back(j);
    }
    report.h_ok = true;
    for (int k = 0; k < h.size(); ++k) {
        if (std::abs(h[k]) > tol_h) report.h_ok = false;
    }
    report.feasible = report.g_ok && report.h_ok;
    return report;
}

}  // namespace moho
