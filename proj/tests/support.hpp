#pragma once

// Test-side oracles kept independent of the library implementation paths
// they check: finite differences of the assembled homotopy residual, an
// O(N^3) nondominated sorter, and a direct crowding-distance computation.

#include <algorithm>
#include <random>
#include <vector>

#include "moho/homotopy.hpp"
#include "moho/nsga2.hpp"
#include "moho/problem.hpp"

namespace moho::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline Vector random_vector(std::mt19937_64& rng, int size, double lo, double hi) {
    Vector v(size);
    for (int i = 0; i < size; ++i) v[i] = uniform(rng, lo, hi);
    return v;
}

/// Interior random state: strictly positive w and u, t away from both ends.
inline HomotopyState random_interior_state(std::mt19937_64& rng, const ProblemDefinition& pb) {
    HomotopyState state;
    state.x = random_vector(rng, pb.n(), -2.0, 2.0);
    state.w = random_vector(rng, pb.p(), 0.2, 1.0);
    state.u = random_vector(rng, pb.m(), 0.2, 1.0);
    state.v = random_vector(rng, pb.s(), -1.0, 1.0);
    state.t = uniform(rng, 0.05, 0.95);
    return state;
}

inline Anchor random_anchor(std::mt19937_64& rng, const ProblemDefinition& pb) {
    // Rejection-sample a start with g < 0 out of the inner half box.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Vector x0(pb.n());
        for (int i = 0; i < pb.n(); ++i) {
            const double lo = pb.sampling_box().lower[i] * 0.5;
            const double hi = pb.sampling_box().upper[i] * 0.5;
            x0[i] = uniform(rng, lo, hi);
        }
        Vector w = random_vector(rng, pb.p(), 0.1, 1.0);
        Vector u0 = random_vector(rng, pb.m(), 0.2, 2.0);
        try {
            return init_anchor(pb, x0, w, u0);
        } catch (const std::invalid_argument&) {
            continue;  // g(x0) not strictly negative; try again
        }
    }
    throw std::runtime_error("could not sample an anchor with g < 0");
}

/// Central finite differences of assemble_homotopy in all n+p+m+s+1
/// variables; steps are scaled by 1 + |z_i|.
inline Matrix fd_homotopy_jacobian(const ProblemDefinition& pb, const Anchor& anchor,
                                   const HomotopyState& state, double step = 1e-7) {
    EvalCounters scratch(pb.p());
    const Vector z0 = state.flattened();
    const int cols = static_cast<int>(z0.size());
    const int rows = pb.n() + pb.s() + pb.m() + pb.p();
    Matrix jac(rows, cols);
    for (int j = 0; j < cols; ++j) {
        const double h = step * (1.0 + std::abs(z0[j]));
        Vector zp = z0, zm = z0;
        zp[j] += h;
        zm[j] -= h;
        const Vector rp = assemble_homotopy(pb, anchor, HomotopyState::unflatten(zp, pb), scratch);
        const Vector rm = assemble_homotopy(pb, anchor, HomotopyState::unflatten(zm, pb), scratch);
        jac.col(j) = (rp - rm) / (2.0 * h);
    }
    return jac;
}

/// O(N^3) reference nondominated sorter using the same constraint-domination
/// rule: repeatedly peel the set of individuals dominated by nobody.
inline std::vector<std::vector<int>> brute_force_fronts(const std::vector<Individual>& pop) {
    std::vector<int> remaining(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) remaining[i] = static_cast<int>(i);
    std::vector<std::vector<int>> fronts;
    while (!remaining.empty()) {
        std::vector<int> front, rest;
        for (int i : remaining) {
            bool dominated = false;
            for (int j : remaining) {
                if (i != j && constraint_dominates(pop[static_cast<std::size_t>(j)],
                                                   pop[static_cast<std::size_t>(i)])) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(front);
        remaining = rest;
    }
    return fronts;
}

/// Direct crowding computation written independently of the library loop.
inline std::vector<double> reference_crowding(const std::vector<Individual>& front) {
    const int count = static_cast<int>(front.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (count <= 2) return std::vector<double>(static_cast<std::size_t>(count), inf);
    const int p = static_cast<int>(front.front().f.size());
    for (int obj = 0; obj < p; ++obj) {
        std::vector<int> idx(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return front[static_cast<std::size_t>(a)].f[obj] < front[static_cast<std::size_t>(b)].f[obj];
        });
        out[static_cast<std::size_t>(idx.front())] = inf;
        out[static_cast<std::size_t>(idx.back())] = inf;
        const double range = front[static_cast<std::size_t>(idx.back())].f[obj] -
                             front[static_cast<std::size_t>(idx.front())].f[obj];
        if (range <= 0.0) continue;
        for (int i = 1; i + 1 < count; ++i) {
            const int here = idx[static_cast<std::size_t>(i)];
            if (std::isinf(out[static_cast<std::size_t>(here)])) continue;
            out[static_cast<std::size_t>(here)] +=
                (front[static_cast<std::size_t>(idx[static_cast<std::size_t>(i + 1)])].f[obj] -
                 front[static_cast<std::size_t>(idx[static_cast<std::size_t>(i - 1)])].f[obj]) /
                range;
        }
    }
    return out;
}

/// Brute-force double loop dominance filter used to cross-check the library.
inline std::vector<int> brute_force_filter(const std::vector<Vector>& fs, double tol) {
    std::vector<int> keep;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < fs.size() && !dominated; ++j) {
            if (i == j) continue;
            bool all = true, strict = false;
            for (int k = 0; k < fs[i].size(); ++k) {
                if (fs[j][k] > fs[i][k] + tol) all = false;
                if (fs[j][k] < fs[i][k] - tol) strict = true;
            }
            dominated = all && strict;
        }
        if (!dominated) keep.push_back(static_cast<int>(i));
    }
    return keep;
}

}  // namespace moho::testing
