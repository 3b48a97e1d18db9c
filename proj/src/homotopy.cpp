#include "moho/homotopy.hpp"

#include <cmath>
#include <sstream>

namespace moho {

namespace {

void check_state_dims(const ProblemDefinition& pb, const HomotopyState& state) {
    if (state.x.size() != pb.n() || state.w.size() != pb.p() || state.u.size() != pb.m() ||
        state.v.size() != pb.s()) {
        throw std::invalid_argument("homotopy state dimensions do not match problem");
    }
}

void check_nonnegative_weights(const Vector& w) {
    for (int i = 0; i < w.size(); ++i) {
        if (w[i] < 0.0) {
            std::ostringstream msg;
            msg << "w[" << i << "] = " << w[i] << " < 0: w^{3/2} undefined";
            throw std::domain_error(msg.str());
        }
    }
}

Vector pow32(const Vector& w) {
    Vector out(w.size());
    for (int i = 0; i < w.size(); ++i) out[i] = w[i] * std::sqrt(w[i]);
    return out;
}

// Shared residual assembly; the public op increments the homotopy counter,
// kkt_residual reuses this path at t=0 without counting an H evaluation.
Vector assemble_core(const ProblemDefinition& pb, const Vector& x0, const Vector& u0g0,
                     const Vector& w032, const HomotopyState& state, EvalCounters& counters) {
    check_state_dims(pb, state);
    check_nonnegative_weights(state.w);
    const int n = pb.n(), p = pb.p(), m = pb.m(), s = pb.s();
    const double t = state.t;

    const ProblemJacobians jac = jacobians(pb, state.x, counters);
    const auto [g, h] = evaluate_constraints(pb, state.x, counters);

    Vector r(n + s + m + p);
    r.head(n) = (1.0 - t) * (jac.f.transpose() * state.w + jac.g.transpose() * state.u) +
                jac.h.transpose() * state.v + t * (state.x - x0);
    r.segment(n, s) = h;
    r.segment(n + s, m) = state.u.cwiseProduct(g) - t * u0g0;
    const double slack = 1.0 - state.w.sum();
    r.segment(n + s + m, p) =
        (1.0 - t) * slack * Vector::Ones(p) - t * (pow32(state.w) - w032);
    return r;
}

}  // namespace

Vector HomotopyState::flattened() const {
    Vector z(x.size() + w.size() + u.size() + v.size() + 1);
    z << x, w, u, v, t;
    return z;
}

HomotopyState HomotopyState::unflatten(const Vector& z, const ProblemDefinition& pb) {
    const int n = pb.n(), p = pb.p(), m = pb.m(), s = pb.s();
    if (z.size() != n + p + m + s + 1) {
        throw std::invalid_argument("flattened state has wrong length");
    }
    HomotopyState state;
    state.x = z.head(n);
    state.w = z.segment(n, p);
    state.u = z.segment(n + p, m);
    state.v = z.segment(n + p + m, s);
    state.t = z[n + p + m + s];
    return state;
}

Vector assemble_homotopy(const ProblemDefinition& pb, const Anchor& anchor,
                         const HomotopyState& state, EvalCounters& counters) {
    Vector r = assemble_core(pb, anchor.x0, anchor.u0.cwiseProduct(anchor.g0),
                             pow32(anchor.w0), state, counters);
    ++counters.homotopy;
    return r;
}

Matrix homotopy_jacobian(const ProblemDefinition& pb, const Anchor& anchor,
                         const HomotopyState& state, EvalCounters& counters) {
    check_state_dims(pb, state);
    check_nonnegative_weights(state.w);
    const int n = pb.n(), p = pb.p(), m = pb.m(), s = pb.s();
    const double t = state.t;

    const ProblemJacobians jac = jacobians(pb, state.x, counters);
    const ProblemHessians hes = hessians(pb, state.x, counters);
    const auto [g, h] = evaluate_constraints(pb, state.x, counters);

    const int rows = n + s + m + p;
    const int cols = n + p + m + s + 1;
    Matrix jm = Matrix::Zero(rows, cols);
    const int cx = 0, cw = n, cu = n + p, cv = n + p + m, ct = n + p + m + s;

    // Q(x) = (1-t) (sum_i w_i Hf_i + sum_j u_j Hg_j) + sum_k v_k Hh_k + t I
    Matrix q = t * Matrix::Identity(n, n);
    for (int i = 0; i < p; ++i) q += (1.0 - t) * state.w[i] * hes.f[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) q += (1.0 - t) * state.u[j] * hes.g[static_cast<std::size_t>(j)];
    for (int k = 0; k < s; ++k) q += state.v[k] * hes.h[static_cast<std::size_t>(k)];

    jm.block(0, cx, n, n) = q;
    jm.block(0, cw, n, p) = (1.0 - t) * jac.f.transpose();
    jm.block(0, cu, n, m) = (1.0 - t) * jac.g.transpose();
    jm.block(0, cv, n, s) = jac.h.transpose();
    jm.block(0, ct, n, 1) =
        -(jac.f.transpose() * state.w + jac.g.transpose() * state.u) + (state.x - anchor.x0);

    jm.block(n, cx, s, n) = jac.h;

    jm.block(n + s, cx, m, n) = state.u.asDiagonal() * jac.g;
    jm.block(n + s, cu, m, m) = Matrix(g.asDiagonal());
    jm.block(n + s, ct, m, 1) = -anchor.u0.cwiseProduct(anchor.g0);

    Vector wsqrt(p);
    for (int i = 0; i < p; ++i) wsqrt[i] = std::sqrt(state.w[i]);
    jm.block(n + s + m, cw, p, p) =
        -(1.0 - t) * Matrix::Ones(p, p) - 1.5 * t * Matrix(wsqrt.asDiagonal());
    jm.block(n + s + m, ct, p, 1) = -(1.0 - state.w.sum()) * Vector::Ones(p) -
                                    (pow32(state.w) - pow32(anchor.w0));

    ++counters.homotopy_jacobian;
    return jm;
}

Anchor init_anchor(const ProblemDefinition& pb, const Vector& x0, const Vector& w,
                   const Vector& u0) {
    if (x0.size() != pb.n() || w.size() != pb.p() || u0.size() != pb.m()) {
        throw std::invalid_argument("anchor dimensions do not match problem");
    }
    for (int i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) throw std::invalid_argument("anchor weights must be strictly positive");
    }
    for (int j = 0; j < u0.size(); ++j) {
        if (!(u0[j] > 0.0)) throw std::invalid_argument("anchor u0 must be strictly positive");
    }

    Anchor anchor;
    anchor.x0 = x0;
    anchor.u0 = u0;
    anchor.v0 = Vector::Zero(pb.s());
    const double sum = w.sum();
    anchor.w0 = w / sum;
    anchor.weights_renormalized = std::abs(sum - 1.0) > 1e-12;

    EvalCounters scratch(pb.p());
    auto [g0, h0] = evaluate_constraints(pb, x0, scratch);
    (void)h0;  // h(x0) may be violated; Table-style infeasible starts are allowed
    for (int j = 0; j < g0.size(); ++j) {
        if (!(g0[j] < 0.0)) {
            std::ostringstream msg;
            msg << "anchor requires g(x0) < 0 componentwise; g[" << j << "] = " << g0[j];
            throw std::invalid_argument(msg.str());
        }
    }
    anchor.g0 = g0;
    return anchor;
}

namespace detail {

T1Solve try_solve_t1(const ProblemDefinition& pb, const Anchor& anchor, double newton_tol,
                     int max_iter, EvalCounters& counters) {
    const int n = pb.n(), p = pb.p(), m = pb.m(), s = pb.s();
    const int nw = n + p + m + s;

    HomotopyState state{anchor.x0, anchor.w0, anchor.u0, Vector::Zero(s), 1.0};
    Vector r = assemble_homotopy(pb, anchor, state, counters);
    double rnorm = r.norm();

    for (int it = 0; it < max_iter && rnorm > newton_tol; ++it) {
        const Matrix jm = homotopy_jacobian(pb, anchor, state, counters).leftCols(nw);
        const Vector step = jm.fullPivLu().solve(-r);

        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vector z = state.flattened();
            z.head(nw) += lambda * step;
            HomotopyState trial = HomotopyState::unflatten(z, pb);
            if (trial.w.minCoeff() >= 0.0) {
                Vector rt = assemble_homotopy(pb, anchor, trial, counters);
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
        if (!accepted) break;  // stalled; report best iterate
    }
    return {state, rnorm, rnorm <= newton_tol};
}

}  // namespace detail

HomotopyState solve_t1_system(const ProblemDefinition& pb, const Anchor& anchor,
                              double newton_tol, int max_iter, EvalCounters* counters) {
    EvalCounters scratch(pb.p());
    EvalCounters& use = counters ? *counters : scratch;
    detail::T1Solve result = detail::try_solve_t1(pb, anchor, newton_tol, max_iter, use);
    if (!result.converged) {
        std::ostringstream msg;
        msg << "t=1 Newton solve did not reach " << newton_tol << "; final residual "
            << result.residual;
        throw std::runtime_error(msg.str());
    }
    return result.state;
}

double kkt_residual(const ProblemDefinition& pb, const Vector& x, const Vector& w,
                    const Vector& u, const Vector& v, EvalCounters& counters) {
    HomotopyState state{x, w, u, v, 0.0};
    // At t = 0 every anchor term is multiplied by t, so zeros are exact.
    const Vector zero_anchor_x0 = Vector::Zero(pb.n());
    const Vector zero_terms = Vector::Zero(pb.m());
    const Vector w032 = Vector::Zero(pb.p());
    return assemble_core(pb, zero_anchor_x0, zero_terms, w032, state, counters).norm();
}

}  // namespace moho
