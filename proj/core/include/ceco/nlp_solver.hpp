#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ceco/errors.hpp"

namespace ceco {

// Small dense smooth program: minimize f(z) over a box, subject to g(z) <= 0.
// Solved by an outer quadratic-penalty loop around a projected quasi-Newton
// descent. Sized for receding-horizon problems of a few dozen variables.

struct NlpProblem {
  int dimension = 0;
  std::function<double(std::span<const double>)> objective;
  // Writes num_constraints values of g(z); g <= 0 is feasible. May be empty.
  std::function<void(std::span<const double>, std::span<double>)> constraints;
  int num_constraints = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  // Optional analytic objective gradient; finite differences otherwise.
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

enum class SolveStatus { kConverged, kMaxIter, kInfeasibleSoftened };

const char* to_string(SolveStatus s);

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double violation = 0.0;
  double step_length = 0.0;
  double grad_norm = 0.0;
  double penalized = 0.0;
  double penalty_weight = 0.0;
};

struct NlpSolution {
  std::vector<double> z_opt;
  double objective_value = 0.0;
  double max_constraint_violation = 0.0;
  double stationarity_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::kMaxIter;
  // Populated only when SolverOptions::record_iterations is set.
  std::vector<IterationRecord> iteration_log;
};

struct SolverOptions {
  double tol = 1e-4;        // projected-gradient infinity norm
  double feas_tol = 1e-6;   // max constraint violation
  int max_iter = 200;       // accepted steps, across penalty stages
  double penalty_initial = 100.0;
  double penalty_growth = 10.0;
  double fd_step = 1e-6;
  bool record_iterations = false;

  std::vector<std::string> validate() const;
};

// Minimizes the problem starting from z0 (projected into the box first).
// Throws NumericalFailure if the objective or a constraint evaluates to a
// non-finite value.
NlpSolution solve(const NlpProblem& problem, std::span<const double> z0,
                  const SolverOptions& opts);

// Max relative component error between the gradient route the solver would
// use (analytic if supplied, else central differences at fd_step) and central
// differences at fd_step/10. Components where both routes are below 1e-12
// count as zero error.
double check_gradient(const NlpProblem& problem, std::span<const double> z,
                      const SolverOptions& opts);

}  // namespace ceco
