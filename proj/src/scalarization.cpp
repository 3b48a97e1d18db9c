#include "moho/scalarization.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include "moho/registry.hpp"
#include "moho/sampling.hpp"

namespace moho {

namespace {

// Registered start when the problem is a bench entry, box midpoint otherwise.
Vector registered_start(const ProblemDefinition& pb) {
    try {
        return get_preset(pb.name()).scalarization_x0;
    } catch (const std::invalid_argument&) {
        return 0.5 * (pb.sampling_box().lower + pb.sampling_box().upper);
    }
}

// Shared per-x caches so every closure built from the same problem counts one
// constraint-block, one gradient-block and one Hessian-block evaluation per
// distinct point, independent of how many scalar closures exist.
struct SharedEval {
    const ProblemDefinition& pb;
    EvalCounters& counters;

    Vector x_values, x_jacobians, x_hessians, x_objectives;
    Vector g, h, f;
    ProblemJacobians jac;
    ProblemHessians hes;

    explicit SharedEval(const ProblemDefinition& problem, EvalCounters& cnt)
        : pb(problem), counters(cnt) {}

    void refresh_values(const Vector& x) {
        if (x_values.size() == x.size() && x_values == x) return;
        std::tie(g, h) = evaluate_constraints(pb, x, counters);
        x_values = x;
    }
    void refresh_objectives(const Vector& x) {
        if (x_objectives.size() == x.size() && x_objectives == x) return;
        f = evaluate_objectives(pb, x, counters);
        x_objectives = x;
    }
    void refresh_jacobians(const Vector& x) {
        if (x_jacobians.size() == x.size() && x_jacobians == x) return;
        jac = jacobians(pb, x, counters);
        x_jacobians = x;
    }
    void refresh_hessians(const Vector& x) {
        if (x_hessians.size() == x.size() && x_hessians == x) return;
        hes = hessians(pb, x, counters);
        x_hessians = x;
    }
};

using SharedEvalPtr = std::shared_ptr<SharedEval>;

// Original problem constraints as NlpFunctions backed by the shared cache.
void append_problem_constraints(NlpSpec& spec, const SharedEvalPtr& shared) {
    const ProblemDefinition& pb = shared->pb;
    for (int i = 0; i < pb.m(); ++i) {
        spec.ineq.push_back(NlpFunction{
            [shared, i](const Vector& x) {
                shared->refresh_values(x);
                return shared->g[i];
            },
            [shared, i](const Vector& x) -> Vector {
                shared->refresh_jacobians(x);
                return shared->jac.g.row(i);
            },
            [shared, i](const Vector& x) -> Matrix {
                shared->refresh_hessians(x);
                return shared->hes.g[static_cast<std::size_t>(i)];
            },
        });
    }
    for (int j = 0; j < pb.s(); ++j) {
        spec.eq.push_back(NlpFunction{
            [shared, j](const Vector& x) {
                shared->refresh_values(x);
                return shared->h[j];
            },
            [shared, j](const Vector& x) -> Vector {
                shared->refresh_jacobians(x);
                return shared->jac.h.row(j);
            },
            [shared, j](const Vector& x) -> Matrix {
                shared->refresh_hessians(x);
                return shared->hes.h[static_cast<std::size_t>(j)];
            },
        });
    }
}

NlpFunction single_objective(const SharedEvalPtr& shared, int index) {
    return NlpFunction{
        [shared, index](const Vector& x) {
            return evaluate_objective(shared->pb, index, x, shared->counters);
        },
        [shared, index](const Vector& x) -> Vector {
            shared->refresh_jacobians(x);
            return shared->jac.f.row(index);
        },
        [shared, index](const Vector& x) -> Matrix {
            shared->refresh_hessians(x);
            return shared->hes.f[static_cast<std::size_t>(index)];
        },
    };
}

NlpFunction weighted_objective(const SharedEvalPtr& shared, const Vector& w) {
    return NlpFunction{
        [shared, w](const Vector& x) {
            return evaluate_objectives(shared->pb, x, shared->counters).dot(w);
        },
        [shared, w](const Vector& x) -> Vector {
            shared->refresh_jacobians(x);
            return shared->jac.f.transpose() * w;
        },
        [shared, w](const Vector& x) -> Matrix {
            shared->refresh_hessians(x);
            Matrix hess = Matrix::Zero(shared->pb.n(), shared->pb.n());
            for (int i = 0; i < w.size(); ++i) {
                hess += w[i] * shared->hes.f[static_cast<std::size_t>(i)];
            }
            return hess;
        },
    };
}

SolveReport report_from_nlp(const ProblemDefinition& pb, const std::string& method,
                            const NlpResult& result, EvalCounters& counters) {
    SolveReport report;
    report.method = method;
    report.problem = pb.name();
    report.x = result.x;
    report.f = evaluate_objectives(pb, result.x, counters);
    FeasibilityReport feas = feasibility_report(pb, result.x, counters, kFrontTolG, kFrontTolH);
    report.g = feas.g_values;
    report.h = feas.h_values;
    report.feasible = feas.feasible;
    report.kkt_residual = result.kkt_residual;
    report.converged = result.status == NlpStatus::optimal;
    report.message = to_string(result.status);
    return report;
}

FrontEntry entry_from_report(const SolveReport& report, const std::string& params,
                             const FeasibilityReport& feas) {
    FrontEntry entry;
    entry.x = report.x;
    entry.f = report.f;
    entry.method = report.method;
    entry.params = params;
    entry.feasibility = feas;
    entry.kkt_residual = report.kkt_residual;
    return entry;
}

}  // namespace

WeightGrid WeightGrid::uniform(int p, int count) {
    if (p < 1 || count < 1) throw std::invalid_argument("uniform grid needs p >= 1, count >= 1");
    WeightGrid grid;
    if (p == 1) {
        grid.weights.assign(static_cast<std::size_t>(count), Vector::Ones(1));
        return grid;
    }
    if (p != 2) throw std::invalid_argument("uniform weight grids are provided for p <= 2");
    for (int k = 0; k < count; ++k) {
        const double a = count == 1 ? 0.5 : static_cast<double>(k) / (count - 1);
        // Keep weights strictly positive so they remain usable as anchors.
        const double lo = 1e-3;
        const double w1 = lo + (1.0 - 2.0 * lo) * a;
        Vector w(2);
        w << w1, 1.0 - w1;
        grid.weights.push_back(w);
    }
    return grid;
}

void WeightGrid::validate() const {
    if (weights.empty()) throw std::invalid_argument("weight grid is empty");
    for (const Vector& w : weights) {
        if (w.size() == 0) throw std::invalid_argument("weight vector is empty");
        if (w.minCoeff() < 0.0) throw std::invalid_argument("weights must be nonnegative");
        if (std::abs(w.sum() - 1.0) > 1e-12) {
            throw std::invalid_argument("weights must sum to 1 within 1e-12");
        }
    }
}

void EpsilonGrid::validate(int p) const {
    if (primary < 0 || primary >= p) throw std::invalid_argument("primary index out of range");
    if (bounds.empty()) throw std::invalid_argument("epsilon grid is empty");
    for (const Vector& eps : bounds) {
        if (eps.size() != p) throw std::invalid_argument("epsilon vector has wrong length");
    }
}

FrontSet FrontSet::filtered_nondominated(double tol) const {
    std::vector<Vector> fs;
    fs.reserve(entries.size());
    for (const auto& entry : entries) fs.push_back(entry.f);
    const std::vector<int> keep = nondominance_filter(fs, tol);
    FrontSet out;
    out.notes = notes;
    for (int idx : keep) out.entries.push_back(entries[static_cast<std::size_t>(idx)]);
    return out;
}

SolveReport weighted_sum_solve(const ProblemDefinition& pb, const Vector& w, const Vector& x0,
                               EvalCounters& counters) {
    if (w.size() != pb.p()) throw std::invalid_argument("weight vector has wrong length");
    if (w.minCoeff() < 0.0 || w.sum() <= 0.0) {
        throw std::invalid_argument("weights must be nonnegative with positive sum");
    }
    const Vector wn = w / w.sum();

    auto shared = std::make_shared<SharedEval>(pb, counters);
    NlpSpec spec;
    spec.objective = weighted_objective(shared, wn);
    append_problem_constraints(spec, shared);
    spec.x0 = x0;

    NlpResult result = minimize_constrained(spec);
    SolveReport report = report_from_nlp(pb, "wsm", result, counters);
    report.params["w"] = format_vector(wn);
    return report;
}

FrontSet weighted_sum_front(const ProblemDefinition& pb, const WeightGrid& grid,
                            const Vector& x0, EvalCounters& counters) {
    grid.validate();
    FrontSet front;
    for (const Vector& w : grid.weights) {
        SolveReport report = weighted_sum_solve(pb, w, x0, counters);
        const std::string params = "w=" + format_vector(w);
        if (!report.converged || !report.feasible) {
            front.notes.push_back(params + ": " + report.message +
                                  (report.feasible ? "" : " (infeasible)"));
            continue;
        }
        FeasibilityReport feas;
        feas.g_values = report.g;
        feas.h_values = report.h;
        feas.feasible = report.feasible;
        feas.g_ok = feas.h_ok = report.feasible;
        front.entries.push_back(entry_from_report(report, params, feas));
    }
    if (front.entries.empty()) {
        throw std::runtime_error("weighted-sum front: every weight failed");
    }
    return front;
}

SolveReport epsilon_constraint_solve(const ProblemDefinition& pb, int primary,
                                     const Vector& bounds, const Vector& x0,
                                     EvalCounters& counters) {
    if (primary < 0 || primary >= pb.p()) throw std::invalid_argument("primary index out of range");
    if (bounds.size() != pb.p()) throw std::invalid_argument("epsilon vector has wrong length");

    auto shared = std::make_shared<SharedEval>(pb, counters);
    NlpSpec spec;
    spec.objective = single_objective(shared, primary);
    append_problem_constraints(spec, shared);
    for (int k = 0; k < pb.p(); ++k) {
        if (k == primary) continue;
        const double bound = bounds[k];
        if (!std::isfinite(bound)) continue;  // +inf bound is vacuous
        NlpFunction base = single_objective(shared, k);
        spec.ineq.push_back(NlpFunction{
            [value = base.value, bound](const Vector& x) { return value(x) - bound; },
            base.gradient,
            base.hessian,
        });
    }
    spec.x0 = x0;

    NlpResult result = minimize_constrained(spec);
    SolveReport report = report_from_nlp(pb, "ecm", result, counters);
    report.params["primary"] = std::to_string(primary);
    report.params["eps"] = format_vector(bounds);
    if (result.status == NlpStatus::infeasible) {
        report.message = "infeasible epsilon combination";
    }
    return report;
}

FrontSet epsilon_constraint_front(const ProblemDefinition& pb, const EpsilonGrid& grid,
                                  const Vector& x0, EvalCounters& counters) {
    grid.validate(pb.p());
    FrontSet front;
    for (const Vector& eps : grid.bounds) {
        SolveReport report = epsilon_constraint_solve(pb, grid.primary, eps, x0, counters);
        const std::string params = "eps=" + format_vector(eps);
        if (!report.converged || !report.feasible) {
            front.notes.push_back(params + ": " + report.message);
            continue;
        }
        FeasibilityReport feas;
        feas.g_values = report.g;
        feas.h_values = report.h;
        feas.feasible = report.feasible;
        feas.g_ok = feas.h_ok = report.feasible;
        front.entries.push_back(entry_from_report(report, params, feas));
    }
    if (front.entries.empty()) {
        throw std::runtime_error("epsilon-constraint front: every bound failed");
    }
    return front;
}

IdealPoint ideal_point(const ProblemDefinition& pb, const Vector& x0, EvalCounters& counters,
                       std::uint64_t seed, int cloud_count) {
    IdealPoint ideal;
    ideal.f_star.resize(pb.p());

    Vector x_stage = x0;
    for (int i = 0; i < pb.p(); ++i) {
        auto shared = std::make_shared<SharedEval>(pb, counters);
        NlpSpec spec;
        spec.objective = single_objective(shared, i);
        append_problem_constraints(spec, shared);
        spec.x0 = x0;
        NlpResult result = minimize_constrained(spec);
        if (result.status != NlpStatus::optimal) {
            std::ostringstream msg;
            msg << "ideal point: objective " << i << " subsolve ended with "
                << to_string(result.status);
            throw std::runtime_error(msg.str());
        }
        ideal.f_star[i] = result.objective;
        x_stage = result.x;
    }

    // Scales from the objective ranges over a projected feasible cloud.
    PointCloud cloud = projected_cloud(pb, pb.sampling_box(), cloud_count, seed, counters);
    ideal.scales = Vector::Ones(pb.p());
    if (!cloud.points.empty()) {
        Vector lo = cloud.points.front().f, hi = cloud.points.front().f;
        for (const CloudPoint& point : cloud.points) {
            lo = lo.cwiseMin(point.f);
            hi = hi.cwiseMax(point.f);
        }
        for (int i = 0; i < pb.p(); ++i) {
            ideal.scales[i] = std::max(hi[i] - lo[i], 1e-8);
        }
    }
    return ideal;
}

SolveReport global_criterion_solve(const ProblemDefinition& pb, const Vector& x0,
                                   double norm_p, EvalCounters& counters, std::uint64_t seed,
                                   int cloud_count) {
    if (norm_p < 1.0) throw std::invalid_argument("global criterion requires norm_p >= 1");
    const IdealPoint ideal = ideal_point(pb, x0, counters, seed, cloud_count);

    auto shared = std::make_shared<SharedEval>(pb, counters);
    const Vector f_star = ideal.f_star;
    const Vector scales = ideal.scales;

    NlpSpec spec;
    spec.objective.value = [shared, f_star, scales, norm_p](const Vector& x) {
        const Vector f = evaluate_objectives(shared->pb, x, shared->counters);
        double sum = 0.0;
        for (int i = 0; i < f.size(); ++i) {
            sum += std::pow(std::abs(f[i] - f_star[i]) / scales[i], norm_p);
        }
        return sum;  // monotone transform of D_p; minimizers coincide
    };
    spec.objective.gradient = [shared, f_star, scales, norm_p](const Vector& x) -> Vector {
        shared->refresh_objectives(x);
        shared->refresh_jacobians(x);
        Vector grad = Vector::Zero(x.size());
        for (int i = 0; i < shared->f.size(); ++i) {
            const double d = shared->f[i] - f_star[i];
            const double mag = std::abs(d);
            if (mag == 0.0) continue;
            const double coeff = norm_p * std::pow(mag, norm_p - 1.0) * (d > 0 ? 1.0 : -1.0) /
                                 std::pow(scales[i], norm_p);
            grad += coeff * Vector(shared->jac.f.row(i));
        }
        return grad;
    };
    if (norm_p == 2.0) {
        spec.objective.hessian = [shared, f_star, scales](const Vector& x) -> Matrix {
            shared->refresh_objectives(x);
            shared->refresh_jacobians(x);
            shared->refresh_hessians(x);
            Matrix hess = Matrix::Zero(x.size(), x.size());
            for (int i = 0; i < shared->f.size(); ++i) {
                const Vector gi = shared->jac.f.row(i);
                const double d = shared->f[i] - f_star[i];
                const double s2 = scales[i] * scales[i];
                hess += (2.0 / s2) * (gi * gi.transpose() +
                                      d * shared->hes.f[static_cast<std::size_t>(i)]);
            }
            return hess;
        };
    }
    append_problem_constraints(spec, shared);
    spec.x0 = x0;

    NlpResult result = minimize_constrained(spec);
    SolveReport report = report_from_nlp(pb, "gcm", result, counters);
    report.params["norm_p"] = std::to_string(norm_p);
    report.params["f_star"] = format_vector(f_star);
    report.params["scales"] = format_vector(scales);
    report.params["deviation"] = std::to_string(std::pow(result.objective, 1.0 / norm_p));
    return report;
}

SolveReport lexicographic_solve(const ProblemDefinition& pb,
                                const std::vector<int>& priority_order, double tol_lex,
                                EvalCounters& counters) {
    if (tol_lex <= 0.0) throw std::invalid_argument("tol_lex must be positive");
    if (static_cast<int>(priority_order.size()) != pb.p()) {
        throw std::invalid_argument("priority order must be a permutation of the objectives");
    }
    std::vector<bool> seen(static_cast<std::size_t>(pb.p()), false);
    for (int idx : priority_order) {
        if (idx < 0 || idx >= pb.p() || seen[static_cast<std::size_t>(idx)]) {
            throw std::invalid_argument("priority order must be a permutation of the objectives");
        }
        seen[static_cast<std::size_t>(idx)] = true;
    }

    Vector x_stage = registered_start(pb);
    std::vector<std::pair<int, double>> stage_optima;
    NlpResult result;

    for (std::size_t stage = 0; stage < priority_order.size(); ++stage) {
        const int objective_index = priority_order[stage];
        auto shared = std::make_shared<SharedEval>(pb, counters);
        NlpSpec spec;
        spec.objective = single_objective(shared, objective_index);
        append_problem_constraints(spec, shared);
        for (const auto& [prev_index, prev_value] : stage_optima) {
            NlpFunction base = single_objective(shared, prev_index);
            const double bound = prev_value + tol_lex;
            spec.ineq.push_back(NlpFunction{
                [value = base.value, bound](const Vector& x) { return value(x) - bound; },
                base.gradient,
                base.hessian,
            });
        }
        spec.x0 = x_stage;
        // Later stages pin earlier optima to within tol_lex, leaving almost
        // no feasible slack; a hot penalty start keeps the multipliers from
        // crawling.
        spec.rho0 = 1e4;
        spec.max_iter = 2000;
        result = minimize_constrained(spec);
        if (result.status == NlpStatus::infeasible) {
            std::ostringstream msg;
            msg << "lexicographic stage " << stage + 1 << " (objective " << objective_index
                << ") is infeasible";
            throw StageInfeasibleError(msg.str(), static_cast<int>(stage));
        }
        if (result.status != NlpStatus::optimal) {
            std::ostringstream msg;
            msg << "lexicographic stage " << stage + 1 << " ended with "
                << to_string(result.status);
            throw std::runtime_error(msg.str());
        }
        stage_optima.emplace_back(objective_index, result.objective);
        x_stage = result.x;
    }

    SolveReport report = report_from_nlp(pb, "lex", result, counters);
    std::ostringstream order_str, optima_str;
    for (std::size_t i = 0; i < priority_order.size(); ++i) {
        order_str << (i ? "," : "") << priority_order[i];
        optima_str << (i ? "," : "") << stage_optima[i].second;
    }
    report.params["order"] = order_str.str();
    report.params["stage_optima"] = optima_str.str();
    report.params["tol_lex"] = std::to_string(tol_lex);
    return report;
}

EpsilonGrid auto_epsilon_grid(const ProblemDefinition& pb, int primary, int per_axis,
                              EvalCounters& counters, std::uint64_t seed, int cloud_count) {
    if (per_axis < 1) throw std::invalid_argument("epsilon grid needs per_axis >= 1");
    if (primary < 0 || primary >= pb.p()) throw std::invalid_argument("primary index out of range");
    if (pb.p() != 2) {
        throw std::invalid_argument("automatic epsilon grids are provided for p == 2");
    }
    PointCloud cloud = projected_cloud(pb, pb.sampling_box(), cloud_count, seed, counters);
    if (cloud.points.empty()) throw std::runtime_error("epsilon grid: projected cloud is empty");

    const int other = 1 - primary;
    double lo = cloud.points.front().f[other], hi = lo;
    for (const CloudPoint& point : cloud.points) {
        lo = std::min(lo, point.f[other]);
        hi = std::max(hi, point.f[other]);
    }
    EpsilonGrid grid;
    grid.primary = primary;
    for (int k = 0; k < per_axis; ++k) {
        const double frac = per_axis == 1 ? 0.5 : static_cast<double>(k) / (per_axis - 1);
        Vector eps = Vector::Zero(pb.p());
        eps[other] = lo + (hi - lo) * frac;
        grid.bounds.push_back(eps);
    }
    return grid;
}

}  // namespace moho
