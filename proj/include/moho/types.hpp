#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace moho {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a Jacobian is rank-deficient at an evaluation point.
class SingularPointError : public std::runtime_error {
public:
    SingularPointError(const std::string& what, double smallest_singular_value)
        : std::runtime_error(what), smallest_singular_value_(smallest_singular_value) {}

    double smallest_singular_value() const { return smallest_singular_value_; }

private:
    double smallest_singular_value_;
};

/// Raised when a corrector step cannot reduce the residual within the
/// backtracking budget.
class StepFailureError : public std::runtime_error {
public:
    StepFailureError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

/// Raised by the lexicographic driver when a stage subproblem is infeasible.
class StageInfeasibleError : public std::runtime_error {
public:
    StageInfeasibleError(const std::string& what, int stage)
        : std::runtime_error(what), stage_(stage) {}

    int stage() const { return stage_; }

private:
    int stage_;
};

}  // namespace moho
