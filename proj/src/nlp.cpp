#include "moho/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace moho {

namespace {

Matrix hessian_of(const NlpFunction& fn, const Vector& x) {
    if (fn.hessian) return fn.hessian(x);
    return fd_hessian(fn.gradient, x);
}

struct AugmentedLagrangian {
    const NlpSpec& spec;
    Vector lambda_eq;
    Vector lambda_ineq;
    double rho = 10.0;

    double value(const Vector& x) const {
        double val = spec.objective.value(x);
        for (std::size_t j = 0; j < spec.eq.size(); ++j) {
            const double hv = spec.eq[j].value(x);
            val += lambda_eq[static_cast<int>(j)] * hv + 0.5 * rho * hv * hv;
        }
        for (std::size_t i = 0; i < spec.ineq.size(); ++i) {
            const double gv = spec.ineq[i].value(x);
            const double lam = lambda_ineq[static_cast<int>(i)];
            const double shifted = lam + rho * gv;
            if (shifted > 0.0) {
                val += (shifted * shifted - lam * lam) / (2.0 * rho);
            } else {
                val -= lam * lam / (2.0 * rho);
            }
        }
        return val;
    }

    Vector gradient(const Vector& x) const {
        Vector g = spec.objective.gradient(x);
        for (std::size_t j = 0; j < spec.eq.size(); ++j) {
            const double hv = spec.eq[j].value(x);
            g += (lambda_eq[static_cast<int>(j)] + rho * hv) * spec.eq[j].gradient(x);
        }
        for (std::size_t i = 0; i < spec.ineq.size(); ++i) {
            const double gv = spec.ineq[i].value(x);
            const double shifted = lambda_ineq[static_cast<int>(i)] + rho * gv;
            if (shifted > 0.0) g += shifted * spec.ineq[i].gradient(x);
        }
        return g;
    }

    Matrix hessian(const Vector& x) const {
        Matrix hess = hessian_of(spec.objective, x);
        for (std::size_t j = 0; j < spec.eq.size(); ++j) {
            const double hv = spec.eq[j].value(x);
            const Vector grad = spec.eq[j].gradient(x);
            hess += (lambda_eq[static_cast<int>(j)] + rho * hv) * hessian_of(spec.eq[j], x);
            hess += rho * grad * grad.transpose();
        }
        for (std::size_t i = 0; i < spec.ineq.size(); ++i) {
            const double gv = spec.ineq[i].value(x);
            const double shifted = lambda_ineq[static_cast<int>(i)] + rho * gv;
            if (shifted > 0.0) {
                const Vector grad = spec.ineq[i].gradient(x);
                hess += shifted * hessian_of(spec.ineq[i], x);
                hess += rho * grad * grad.transpose();
            }
        }
        return hess;
    }
};

// Damped Newton with a multiple-of-identity modification when the Hessian is
// not positive definite. Returns inner iterations consumed.
int newton_minimize(const AugmentedLagrangian& al, Vector& x, double gtol, int iter_budget) {
    const int n = static_cast<int>(x.size());
    int used = 0;
    while (used < iter_budget) {
        const Vector grad = al.gradient(x);
        if (grad.norm() <= gtol) break;
        ++used;

        Matrix hess = al.hessian(x);
        double tau = 0.0;
        Eigen::LLT<Matrix> llt(hess);
        if (llt.info() != Eigen::Success) {
            const double base = std::max(1.0, hess.trace() / n) * 1e-8;
            tau = base;
            for (int tries = 0; tries < 60; ++tries) {
                llt.compute(hess + tau * Matrix::Identity(n, n));
                if (llt.info() == Eigen::Success) break;
                tau *= 10.0;
            }
        }
        Vector step = llt.info() == Eigen::Success
                          ? Vector(llt.solve(-grad))
                          : Vector(-grad);  // gradient descent as a last resort

        const double slope = grad.dot(step);
        if (slope >= 0.0) step = -grad;

        const double base_val = al.value(x);
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Vector trial = x + lambda * step;
            if (al.value(trial) <= base_val + 1e-4 * lambda * grad.dot(step)) {
                x = trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;  // flat region within line-search resolution
    }
    return used;
}

}  // namespace

const char* to_string(NlpStatus status) {
    switch (status) {
        case NlpStatus::optimal: return "optimal";
        case NlpStatus::max_iter: return "max_iter";
        case NlpStatus::infeasible: return "infeasible";
    }
    return "unknown";
}

NlpResult minimize_constrained(const NlpSpec& spec) {
    if (spec.tol_opt <= 0.0 || spec.tol_feas <= 0.0) {
        throw std::invalid_argument("NlpSpec tolerances must be positive");
    }
    if (!spec.objective.value || !spec.objective.gradient) {
        throw std::invalid_argument("NlpSpec objective requires value and gradient");
    }
    const int m = static_cast<int>(spec.ineq.size());
    const int s = static_cast<int>(spec.eq.size());

    AugmentedLagrangian al{spec, Vector::Zero(s), Vector::Zero(m), spec.rho0};
    Vector x = spec.x0;
    constexpr double kRhoMax = 1e12;

    NlpResult result;
    result.iterations = 0;
    double best_violation = std::numeric_limits<double>::infinity();
    int stagnant_outers = 0;

    const int max_outer = 60;
    for (int outer = 0; outer < max_outer; ++outer) {
        const double gtol = std::max(0.1 * spec.tol_opt, std::min(1e-2, 1.0 / al.rho));
        const int inner_budget = std::min(100, spec.max_iter - result.iterations);
        result.iterations += newton_minimize(al, x, gtol, inner_budget);

        Vector hv(s), gv(m);
        for (int j = 0; j < s; ++j) hv[j] = spec.eq[static_cast<std::size_t>(j)].value(x);
        for (int i = 0; i < m; ++i) gv[i] = spec.ineq[static_cast<std::size_t>(i)].value(x);

        Vector u(m), v(s);
        for (int i = 0; i < m; ++i) u[i] = std::max(0.0, al.lambda_ineq[i] + al.rho * gv[i]);
        for (int j = 0; j < s; ++j) v[j] = al.lambda_eq[j] + al.rho * hv[j];

        Vector stationarity = spec.objective.gradient(x);
        for (int i = 0; i < m; ++i) {
            if (u[i] > 0.0) stationarity += u[i] * spec.ineq[static_cast<std::size_t>(i)].gradient(x);
        }
        for (int j = 0; j < s; ++j) {
            stationarity += v[j] * spec.eq[static_cast<std::size_t>(j)].gradient(x);
        }
        double complementarity = 0.0;
        for (int i = 0; i < m; ++i) complementarity = std::max(complementarity, std::abs(u[i] * gv[i]));

        result.x = x;
        result.objective = spec.objective.value(x);
        result.ineq_multipliers = u;
        result.eq_multipliers = v;
        result.kkt_residual = stationarity.norm();
        result.max_ineq_violation = m ? std::max(0.0, gv.maxCoeff()) : 0.0;
        result.max_eq_violation = s ? hv.cwiseAbs().maxCoeff() : 0.0;
        const double violation = std::max(result.max_ineq_violation, result.max_eq_violation);

        if (violation >= 0.9 * best_violation && violation > spec.tol_feas) {
            ++stagnant_outers;
        } else {
            stagnant_outers = 0;
        }
        const bool large_violation = violation > std::max(1e2 * spec.tol_feas, 1e-6);

        if (result.kkt_residual <= spec.tol_opt && violation <= spec.tol_feas &&
            complementarity <= 1e-6) {
            result.status = NlpStatus::optimal;
            return result;
        }
        if (large_violation && al.rho >= 1e6 && stagnant_outers >= 3) {
            result.status = NlpStatus::infeasible;  // restoration stalled under escalation
            return result;
        }
        if (result.iterations >= spec.max_iter) {
            result.status = large_violation && al.rho >= 1e8 ? NlpStatus::infeasible
                                                             : NlpStatus::max_iter;
            return result;
        }

        al.lambda_eq = v;
        al.lambda_ineq = u;
        if (violation > 0.25 * best_violation) {
            al.rho = std::min(al.rho * 10.0, kRhoMax);
        }
        best_violation = std::min(best_violation, violation);
    }
    result.status = NlpStatus::max_iter;
    return result;
}

NlpResult project_to_feasible(const ProblemDefinition& pb, const Vector& x0,
                              EvalCounters& counters) {
    if (pb.m() + pb.s() == 0) {
        throw std::invalid_argument("project_to_feasible requires at least one constraint");
    }
    if (x0.size() != pb.n()) throw std::invalid_argument("x0 has wrong dimension");

    NlpSpec spec;
    spec.objective = {
        [x0](const Vector& z) { return (z - x0).squaredNorm(); },
        [x0](const Vector& z) -> Vector { return 2.0 * (z - x0); },
        [n = pb.n()](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(n, n); },
    };

    // One-point cache so each distinct z costs one counted constraint-block
    // evaluation (and one gradient block) regardless of m + s.
    struct Cache {
        Vector z;
        Vector g, h;
        Matrix jg, jh;
        bool has_values = false;
        bool has_jac = false;
    };
    auto cache = std::make_shared<Cache>();
    auto values_at = [&pb, &counters, cache](const Vector& z) {
        if (!cache->has_values || cache->z.size() != z.size() || cache->z != z) {
            auto [g, h] = evaluate_constraints(pb, z, counters);
            cache->g = g;
            cache->h = h;
            cache->z = z;
            cache->has_values = true;
            cache->has_jac = false;
        }
    };
    auto jacobians_at = [&pb, &counters, cache, values_at](const Vector& z) {
        values_at(z);
        if (!cache->has_jac) {
            ProblemJacobians jac = jacobians(pb, z, counters);
            cache->jg = jac.g;
            cache->jh = jac.h;
            cache->has_jac = true;
        }
    };

    for (int i = 0; i < pb.m(); ++i) {
        spec.ineq.push_back(NlpFunction{
            [values_at, cache, i](const Vector& z) {
                values_at(z);
                return cache->g[i];
            },
            [jacobians_at, cache, i](const Vector& z) -> Vector {
                jacobians_at(z);
                return cache->jg.row(i);
            },
            [&pb, i](const Vector& z) -> Matrix {
                const auto& fn = pb.ineq_constraints()[static_cast<std::size_t>(i)];
                return fn.hessian ? fn.hessian(z) : fd_hessian(fn.gradient, z);
            },
        });
    }
    for (int j = 0; j < pb.s(); ++j) {
        spec.eq.push_back(NlpFunction{
            [values_at, cache, j](const Vector& z) {
                values_at(z);
                return cache->h[j];
            },
            [jacobians_at, cache, j](const Vector& z) -> Vector {
                jacobians_at(z);
                return cache->jh.row(j);
            },
            [&pb, j](const Vector& z) -> Matrix {
                const auto& fn = pb.eq_constraints()[static_cast<std::size_t>(j)];
                return fn.hessian ? fn.hessian(z) : fd_hessian(fn.gradient, z);
            },
        });
    }
    spec.x0 = x0;
    return minimize_constrained(spec);
}

}  // namespace moho
