#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moho/homotopy.hpp"
#include "moho/report.hpp"

namespace moho {

struct TrackerConfig {
    double alpha0 = 0.05;
    double alpha_min = 1e-5;
    double alpha_max = 0.2;
    double eps_t = 1e-6;        // termination tolerance on |t|
    int k_max = 5000;
    int corrector_iters = 1;    // corrections per step when not iterating to tolerance
    bool iterate_to_tol = true; // iterate the corrector until corrector_tol
    double corrector_tol = 1e-10;
    int backtrack_max = 30;
    double h_low = 0.01;        // residual threshold for step growth
    double h_high = 1.0;        // residual threshold for step shrink
    bool t1_prepass = true;
    double t0 = 1.0;
    double endgame_tol = 1e-10;
    int endgame_max_iter = 80;

    void validate() const;
};

struct StepRecord {
    HomotopyState before;
    HomotopyState after;
    Vector tangent;
    double alpha = 0.0;
    double residual = 0.0;   // ||H|| after correction
    int orientation = 1;     // sign of the used tangent relative to det > 0
    int backtracks = 0;
    bool regularized = false;
};

enum class TraceOutcome { converged, max_iters, step_failure };

struct PathTrace {
    std::vector<StepRecord> records;
    TraceOutcome outcome = TraceOutcome::step_failure;
    HomotopyState final_state;
    double final_kkt = 0.0;
    std::string message;
};

const char* to_string(TraceOutcome outcome);

/// Unit null-space vector of J, oriented so that det([J; xi']) > 0. When the
/// determinant is numerically indistinguishable from zero the sign follows
/// the previous tangent. Throws SingularPointError on rank deficiency.
Vector tangent(const Matrix& jacobian, const Vector* previous_tangent = nullptr);

/// Euler predictor along the flattened (omega, t); t is clamped to <= 1.
HomotopyState predict(const HomotopyState& state, const Vector& xi, double alpha,
                      const ProblemDefinition& problem);

struct CorrectionResult {
    HomotopyState state;
    double residual = 0.0;
    int backtracks = 0;
    bool regularized = false;
};

/// Minimum-norm Gauss-Newton corrections; each update backtracks until
/// w >= 0, u >= 0 and the residual does not increase.
CorrectionResult correct(const ProblemDefinition& problem, const Anchor& anchor,
                         const HomotopyState& state_pred, const TrackerConfig& cfg,
                         EvalCounters& counters);

double adapt_step(double alpha, double residual_norm, const TrackerConfig& cfg);

PathTrace trace(const ProblemDefinition& problem, const Anchor& anchor,
                const TrackerConfig& cfg, EvalCounters& counters);

std::vector<SolveReport> pareto_front_homotopy(const ProblemDefinition& problem,
                                               const std::vector<Vector>& weight_list,
                                               const Vector& x0, const Vector& u0,
                                               const TrackerConfig& cfg,
                                               EvalCounters& counters,
                                               bool parallel = false);

/// Builds a SolveReport from a finished trace (objective values, residuals,
/// feasibility at solver-grade tolerances).
SolveReport report_from_trace(const ProblemDefinition& problem, const PathTrace& path,
                              EvalCounters& counters);

}  // namespace moho
