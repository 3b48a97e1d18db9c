#include "moho/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace moho {

namespace {

constexpr double kRankTolerance = 1e-10;   // relative smallest-singular-value cutoff
constexpr double kDetTolerance = 1e-12;    // orientation ambiguity threshold

// Minimum-norm update -J' (J J')^{-1} r; falls back to a ridge-regularized
// solve when J J' is numerically singular.
Vector minimum_norm_step(const Matrix& jacobian, const Vector& residual, bool* regularized) {
    const Matrix gram = jacobian * jacobian.transpose();
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Vector y = ldlt.solve(residual);
        const double check = (gram * y - residual).norm();
        if (check <= 1e-8 * (1.0 + residual.norm())) {
            return -jacobian.transpose() * y;
        }
    }
    if (regularized) *regularized = true;
    const double ridge = 1e-12 * gram.trace();
    const Matrix damped = gram + ridge * Matrix::Identity(gram.rows(), gram.cols());
    const Vector y = damped.ldlt().solve(residual);
    return -jacobian.transpose() * y;
}

bool state_in_cone(const HomotopyState& state) {
    return (state.w.size() == 0 || state.w.minCoeff() >= 0.0) &&
           (state.u.size() == 0 || state.u.minCoeff() >= 0.0);
}

// Damped Gauss-Newton on the KKT system in omega with t fixed at zero.
// The square omega Jacobian is rank-deficient there for p >= 2 (the weight
// block degenerates to a single normalization row), so steps use a
// minimum-norm least-squares solve.
HomotopyState kkt_endgame(const ProblemDefinition& pb, HomotopyState state,
                          const TrackerConfig& cfg, EvalCounters& counters,
                          double* final_residual) {
    const int n = pb.n(), p = pb.p(), m = pb.m(), s = pb.s();
    const int nw = n + p + m + s;
    state.t = 0.0;

    Anchor zero_anchor;
    zero_anchor.x0 = Vector::Zero(n);
    zero_anchor.w0 = Vector::Zero(p);
    zero_anchor.u0 = Vector::Zero(m);
    zero_anchor.v0 = Vector::Zero(s);
    zero_anchor.g0 = Vector::Zero(m);

    Vector r = assemble_homotopy(pb, zero_anchor, state, counters);
    double rnorm = r.norm();
    for (int it = 0; it < cfg.endgame_max_iter && rnorm > cfg.endgame_tol; ++it) {
        const Matrix jm = homotopy_jacobian(pb, zero_anchor, state, counters).leftCols(nw);
        const Vector step =
            jm.completeOrthogonalDecomposition().solve(-r);
        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
            Vector z = state.flattened();
            z.head(nw) += lambda * step;
            HomotopyState trial = HomotopyState::unflatten(z, pb);
            trial.t = 0.0;
            if (state_in_cone(trial)) {
                const Vector rt = assemble_homotopy(pb, zero_anchor, trial, counters);
                if (rt.norm() < rnorm) {
                    state = trial;
                    r = rt;
                    rnorm = rt.norm();
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) break;  // boundary stall; keep the best iterate
    }
    if (final_residual) *final_residual = rnorm;
    return state;
}

}  // namespace

void TrackerConfig::validate() const {
    if (!(0.0 < alpha_min && alpha_min <= alpha0 && alpha0 <= alpha_max)) {
        throw std::invalid_argument("step sizes must satisfy 0 < alpha_min <= alpha0 <= alpha_max");
    }
    if (eps_t <= 0.0) throw std::invalid_argument("eps_t must be positive");
    if (!(h_low < h_high)) throw std::invalid_argument("h_low must be below h_high");
    if (t0 <= 0.0 || t0 > 1.0) throw std::invalid_argument("t0 must lie in (0, 1]");
}

const char* to_string(TraceOutcome outcome) {
    switch (outcome) {
        case TraceOutcome::converged: return "converged";
        case TraceOutcome::max_iters: return "max_iters";
        case TraceOutcome::step_failure: return "step_failure";
    }
    return "unknown";
}

Vector tangent(const Matrix& jacobian, const Vector* previous_tangent) {
    const auto rows = jacobian.rows();
    const auto cols = jacobian.cols();
    if (cols <= rows) {
        throw std::invalid_argument("tangent expects an underdetermined Jacobian");
    }
    Eigen::JacobiSVD<Matrix> svd(jacobian, Eigen::ComputeFullV);
    const Vector& svals = svd.singularValues();
    const double smax = svals[0];
    const double smin = svals[rows - 1];
    if (smax <= 0.0 || smin < kRankTolerance * smax) {
        std::ostringstream msg;
        msg << "rank-deficient Jacobian: smallest singular value " << smin;
        throw SingularPointError(msg.str(), smin);
    }
    Vector xi = svd.matrixV().col(cols - 1);
    xi /= xi.norm();

    // The determinant orientation needs a square bordered matrix; with a
    // wider null space only the continuity fallback applies.
    if (cols == rows + 1) {
        Matrix bordered(cols, cols);
        bordered.topRows(rows) = jacobian;
        bordered.bottomRows(1) = xi.transpose();
        const double det = bordered.partialPivLu().determinant();

        double scale = 1.0;  // Hadamard bound of the bordered matrix
        for (int i = 0; i < rows; ++i) scale *= jacobian.row(i).norm();
        if (std::abs(det) > kDetTolerance * scale) {
            if (det < 0.0) xi = -xi;
            return xi;
        }
    }
    if (previous_tangent && previous_tangent->size() == xi.size() &&
        xi.dot(*previous_tangent) < 0.0) {
        xi = -xi;
    }
    return xi;
}

HomotopyState predict(const HomotopyState& state, const Vector& xi, double alpha,
                      const ProblemDefinition& problem) {
    if (alpha < 0.0) throw std::invalid_argument("predict requires alpha >= 0");
    Vector z = state.flattened();
    if (xi.size() != z.size()) throw std::invalid_argument("tangent has wrong length");
    z += alpha * xi;
    HomotopyState out = HomotopyState::unflatten(z, problem);
    if (out.t > 1.0) out.t = 1.0;
    return out;
}

CorrectionResult correct(const ProblemDefinition& pb, const Anchor& anchor,
                         const HomotopyState& state_pred, const TrackerConfig& cfg,
                         EvalCounters& counters) {
    CorrectionResult result;
    result.state = state_pred;
    Vector r = assemble_homotopy(pb, anchor, result.state, counters);
    result.residual = r.norm();

    const int max_updates = cfg.iterate_to_tol ? 30 : cfg.corrector_iters;
    for (int it = 0; it < max_updates; ++it) {
        if (cfg.iterate_to_tol && result.residual <= cfg.corrector_tol) break;
        const Matrix jm = homotopy_jacobian(pb, anchor, result.state, counters);
        bool regularized = false;
        const Vector dz = minimum_norm_step(jm, r, &regularized);
        result.regularized = result.regularized || regularized;

        double lambda = 1.0;
        bool accepted = false;
        HomotopyState trial;
        Vector rt;
        for (int bt = 0; bt <= cfg.backtrack_max; ++bt) {
            trial = HomotopyState::unflatten(result.state.flattened() + lambda * dz, pb);
            if (state_in_cone(trial)) {
                rt = assemble_homotopy(pb, anchor, trial, counters);
                if (rt.norm() <= result.residual) {
                    accepted = true;
                    result.backtracks += bt;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            throw StepFailureError("corrector could not reduce the residual within the backtracking budget",
                                   result.residual);
        }
        result.state = trial;
        r = rt;
        const double next = rt.norm();
        if (!cfg.iterate_to_tol && next >= result.residual && it > 0) {
            result.residual = next;
            break;
        }
        result.residual = next;
    }
    return result;
}

double adapt_step(double alpha, double residual_norm, const TrackerConfig& cfg) {
    double next = alpha;
    if (residual_norm < cfg.h_low) {
        next = std::min(cfg.alpha_max, 2.0 * alpha);
    } else if (residual_norm > cfg.h_high) {
        next = std::max(cfg.alpha_min, alpha / 2.0);
    }
    return std::clamp(next, cfg.alpha_min, cfg.alpha_max);
}

PathTrace trace(const ProblemDefinition& pb, const Anchor& anchor, const TrackerConfig& cfg,
                EvalCounters& counters) {
    cfg.validate();
    PathTrace path;

    HomotopyState state{anchor.x0, anchor.w0, anchor.u0, Vector::Zero(pb.s()), cfg.t0};
    if (cfg.t1_prepass) {
        detail::T1Solve t1 = detail::try_solve_t1(pb, anchor, cfg.corrector_tol, 100, counters);
        state = t1.state;
        state.t = cfg.t0;
        if (!t1.converged) {
            // Track from the best iterate anyway; the corrector may recover.
            std::ostringstream msg;
            msg << "t=1 pre-pass stopped at residual " << t1.residual << "; ";
            path.message += msg.str();
        }
    }

    double alpha = cfg.alpha0;
    double trace_parity = 1.0;
    Vector previous_tangent;
    int k = 1;
    bool reached_end = state.t <= cfg.eps_t;
    bool failed = false;

    while (!reached_end && k <= cfg.k_max) {
        Matrix jm;
        Vector xi;
        try {
            jm = homotopy_jacobian(pb, anchor, state, counters);
            const Vector* prev = previous_tangent.size() ? &previous_tangent : nullptr;
            xi = tangent(jm, prev);
        } catch (const SingularPointError& err) {
            path.message += err.what();
            failed = true;
            break;
        }
        int orientation = 1;
        if (trace_parity < 0.0) {
            xi = -xi;
            orientation = -1;
        }
        if (path.records.empty() && xi[xi.size() - 1] > 0.0) {
            // The det > 0 convention fixes xi only up to the parity of the
            // chosen row/column ordering; the path extends from t0 downward,
            // so pin the parity on the first step.
            xi = -xi;
            orientation = -orientation;
            trace_parity = -trace_parity;
        }
        const double xi_t = xi[xi.size() - 1];
        if (xi_t >= 0.0 && !path.records.empty()) {
            path.message += "tangent reversed in t; aborting";
            failed = true;
            break;
        }

        double alpha_eff = alpha;
        if (xi_t < 0.0 && state.t + alpha * xi_t < 0.0) {
            alpha_eff = state.t / (-xi_t);  // land the prediction at t = 0
        }

        HomotopyState pred = predict(state, xi, alpha_eff, pb);
        CorrectionResult corr;
        try {
            corr = correct(pb, anchor, pred, cfg, counters);
        } catch (const StepFailureError& err) {
            if (alpha > cfg.alpha_min * (1.0 + 1e-12)) {
                alpha = std::max(cfg.alpha_min, alpha / 2.0);
                ++k;
                continue;  // retry the step with a smaller prediction
            }
            path.message += err.what();
            failed = true;
            break;
        }
        if (corr.state.t > state.t + 1e-12 && !path.records.empty()) {
            path.message += "t increased across an accepted step; aborting";
            failed = true;
            break;
        }

        StepRecord record;
        record.before = state;
        record.after = corr.state;
        record.tangent = xi;
        record.alpha = alpha_eff;
        record.residual = corr.residual;
        record.orientation = orientation;
        record.backtracks = corr.backtracks;
        record.regularized = corr.regularized;
        path.records.push_back(std::move(record));

        state = corr.state;
        previous_tangent = xi;
        alpha = adapt_step(alpha, corr.residual, cfg);
        ++k;
        // Predictions are clamped to land at t = 0, so an accepted step past
        // the end sits within corrector distance of it.
        reached_end = state.t <= cfg.eps_t;
    }

    if (failed) {
        path.outcome = TraceOutcome::step_failure;
    } else if (reached_end) {
        path.outcome = TraceOutcome::converged;
    } else {
        path.outcome = TraceOutcome::max_iters;
    }

    double final_residual = 0.0;
    path.final_state = kkt_endgame(pb, state, cfg, counters, &final_residual);
    path.final_kkt = kkt_residual(pb, path.final_state.x, path.final_state.w,
                                  path.final_state.u, path.final_state.v, counters);
    return path;
}

SolveReport report_from_trace(const ProblemDefinition& pb, const PathTrace& path,
                              EvalCounters& counters) {
    SolveReport report;
    report.method = "homotopy";
    report.problem = pb.name();
    report.x = path.final_state.x;
    report.f = evaluate_objectives(pb, report.x, counters);
    FeasibilityReport feas = feasibility_report(pb, report.x, counters);
    report.g = feas.g_values;
    report.h = feas.h_values;
    report.feasible = feas.feasible;
    report.kkt_residual = path.final_kkt;
    report.converged = path.outcome == TraceOutcome::converged && path.final_kkt <= 1e-6;
    report.message = path.message.empty() ? to_string(path.outcome) : path.message;
    return report;
}

std::vector<SolveReport> pareto_front_homotopy(const ProblemDefinition& pb,
                                               const std::vector<Vector>& weight_list,
                                               const Vector& x0, const Vector& u0,
                                               const TrackerConfig& cfg,
                                               EvalCounters& counters, bool parallel) {
    if (weight_list.empty()) throw std::invalid_argument("weight list must be nonempty");

    auto solve_one = [&](const Vector& w) -> std::pair<SolveReport, EvalCounters> {
        EvalCounters local(pb.p());
        SolveReport report;
        const auto started = std::chrono::steady_clock::now();
        try {
            Anchor anchor = init_anchor(pb, x0, w, u0);
            PathTrace path = trace(pb, anchor, cfg, local);
            report = report_from_trace(pb, path, local);
        } catch (const std::exception& err) {
            report.method = "homotopy";
            report.problem = pb.name();
            report.converged = false;
            report.feasible = false;
            report.message = err.what();
        }
        report.params["w"] = format_vector(w);
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        report.counters = local;
        return {std::move(report), std::move(local)};
    };

    std::vector<SolveReport> reports(weight_list.size());
    if (parallel) {
        std::vector<std::future<std::pair<SolveReport, EvalCounters>>> futures;
        futures.reserve(weight_list.size());
        for (const Vector& w : weight_list) {
            futures.push_back(std::async(std::launch::async, solve_one, w));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
            auto [report, local] = futures[i].get();
            reports[i] = std::move(report);
            counters += local;  // deterministic merge in weight order
        }
    } else {
        for (std::size_t i = 0; i < weight_list.size(); ++i) {
            auto [report, local] = solve_one(weight_list[i]);
            reports[i] = std::move(report);
            counters += local;
        }
    }

    bool any_ok = false;
    for (const auto& r : reports) any_ok = any_ok || r.converged;
    if (!any_ok) {
        std::string detail = reports.empty() ? "" : reports.front().message;
        throw std::runtime_error("every homotopy weight failed: " + detail);
    }
    return reports;
}

}  // namespace moho
