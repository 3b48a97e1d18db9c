#pragma once

#include <map>
#include <string>

#include "moho/problem.hpp"
#include "moho/types.hpp"

namespace moho {

/// Outcome of a single solver run, shared by every method.
struct SolveReport {
    std::string method;
    std::string problem;
    Vector x;
    Vector f;
    Vector g;
    Vector h;
    double kkt_residual = 0.0;
    bool feasible = false;
    bool converged = false;
    EvalCounters counters;
    double wall_seconds = 0.0;
    std::map<std::string, std::string> params;
    std::string message;
};

std::string format_vector(const Vector& v, int precision = 10);

}  // namespace moho
