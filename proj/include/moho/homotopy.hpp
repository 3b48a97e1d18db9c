#pragma once

#include "moho/problem.hpp"
#include "moho/types.hpp"

namespace moho {

/// The augmented unknown (x, w, u, v) plus the continuation parameter t.
/// Flattened layout is (x, w, u, v, t), length n+p+m+s+1.
struct HomotopyState {
    Vector x;
    Vector w;  // scalarization weights, w >= 0
    Vector u;  // inequality multipliers, u >= 0
    Vector v;  // equality multipliers
    double t = 1.0;

    Vector flattened() const;
    static HomotopyState unflatten(const Vector& z, const ProblemDefinition& problem);
};

/// Fixed starting data of the homotopy map. w0 is strictly positive and sums
/// to one; u0 is strictly positive; v0 is identically zero; g0 caches g(x0)
/// and must be strictly negative componentwise. x0 may violate h = 0.
struct Anchor {
    Vector x0;
    Vector w0;
    Vector u0;
    Vector v0;
    Vector g0;
    bool weights_renormalized = false;
};

/// Residual of the homotopy map, stacked as
///   block 1 (n): (1-t) (Jf'w + Jg'u) + Jh'v + t (x - x0)
///   block 2 (s): h(x)
///   block 3 (m): u .* g(x) - t * u0 .* g(x0)
///   block 4 (p): (1-t)(1 - sum w) e - t (w^{3/2} - w0^{3/2})
Vector assemble_homotopy(const ProblemDefinition& problem, const Anchor& anchor,
                         const HomotopyState& state, EvalCounters& counters);

/// Partial derivatives of the residual with respect to (x, w, u, v, t), in
/// that column order; rows follow the assemble_homotopy block order.
Matrix homotopy_jacobian(const ProblemDefinition& problem, const Anchor& anchor,
                         const HomotopyState& state, EvalCounters& counters);

Anchor init_anchor(const ProblemDefinition& problem, const Vector& x0, const Vector& w,
                   const Vector& u0);

/// Damped Newton on H(., anchor, t=1) = 0 from the anchor itself. For a
/// feasible x0 (h(x0) = 0) the anchor is the unique solution and is returned
/// unchanged. Throws on non-convergence with the final residual attached.
HomotopyState solve_t1_system(const ProblemDefinition& problem, const Anchor& anchor,
                              double newton_tol = 1e-12, int max_iter = 100,
                              EvalCounters* counters = nullptr);

/// Euclidean norm of the stacked KKT residual (stationarity, h, u.*g,
/// (1 - sum w) e). Equals ||H(., anchor, t=0)|| for any anchor.
double kkt_residual(const ProblemDefinition& problem, const Vector& x, const Vector& w,
                    const Vector& u, const Vector& v, EvalCounters& counters);

namespace detail {

struct T1Solve {
    HomotopyState state;
    double residual = 0.0;
    bool converged = false;
};

/// Best-effort variant of solve_t1_system; never throws on non-convergence.
T1Solve try_solve_t1(const ProblemDefinition& problem, const Anchor& anchor,
                     double newton_tol, int max_iter, EvalCounters& counters);

}  // namespace detail

}  // namespace moho
