#include "ceco/nlp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ceco {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIter: return "max_iter";
    case SolveStatus::kInfeasibleSoftened: return "infeasible_softened";
  }
  return "unknown";
}

std::vector<std::string> SolverOptions::validate() const {
  std::vector<std::string> out;
  if (!(tol > 0.0)) out.push_back("tol must be > 0");
  if (!(feas_tol > 0.0)) out.push_back("feas_tol must be > 0");
  if (!(max_iter > 0)) out.push_back("max_iter must be > 0");
  if (!(penalty_initial > 0.0)) out.push_back("penalty_initial must be > 0");
  if (!(penalty_growth > 1.0)) out.push_back("penalty_growth must be > 1");
  if (!(fd_step > 0.0)) out.push_back("fd_step must be > 0");
  return out;
}

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr double kPenaltyMax = 1e14;
constexpr double kBoundTol = 1e-12;

std::string format_point(std::span<const double> z) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << z[i];
  }
  os << ']';
  return os.str();
}

class PenalizedProblem {
 public:
  PenalizedProblem(const NlpProblem& p, const SolverOptions& opts)
      : p_(p), opts_(opts), g_buf_(static_cast<std::size_t>(p.num_constraints)) {}

  double objective(std::span<const double> z) const {
    const double f = p_.objective(z);
    if (!std::isfinite(f)) {
      throw NumericalFailure("objective is non-finite at " + format_point(z),
                             {z.begin(), z.end()});
    }
    return f;
  }

  // Max over components of max(g_i, 0).
  double violation(std::span<const double> z) const {
    if (p_.num_constraints == 0) return 0.0;
    eval_constraints(z);
    double v = 0.0;
    for (double gi : g_buf_) v = std::max(v, gi);
    return std::max(v, 0.0);
  }

  double penalty_sum(std::span<const double> z) const {
    if (p_.num_constraints == 0) return 0.0;
    eval_constraints(z);
    double s = 0.0;
    for (double gi : g_buf_) {
      const double viol = std::max(gi, 0.0);
      s += viol * viol;
    }
    return s;
  }

  double penalized(std::span<const double> z, double rho) const {
    return objective(z) + rho * penalty_sum(z);
  }

  // Gradient of the penalized objective at weight rho. Uses the analytic
  // objective gradient when supplied; with constraints the penalty part is
  // differenced separately so the analytic route still pays off.
  void gradient(std::span<const double> z, double rho,
                std::vector<double>& grad) const {
    const int n = p_.dimension;
    grad.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> zt(z.begin(), z.end());
    const double h = opts_.fd_step;

    if (p_.gradient) {
      p_.gradient(z, grad);
      if (p_.num_constraints > 0) {
        for (int i = 0; i < n; ++i) {
          const double zi = zt[static_cast<std::size_t>(i)];
          zt[static_cast<std::size_t>(i)] = zi + h;
          const double up = penalty_sum(zt);
          zt[static_cast<std::size_t>(i)] = zi - h;
          const double dn = penalty_sum(zt);
          zt[static_cast<std::size_t>(i)] = zi;
          grad[static_cast<std::size_t>(i)] += rho * (up - dn) / (2.0 * h);
        }
      }
      return;
    }

    for (int i = 0; i < n; ++i) {
      const double zi = zt[static_cast<std::size_t>(i)];
      zt[static_cast<std::size_t>(i)] = zi + h;
      const double up = penalized(zt, rho);
      zt[static_cast<std::size_t>(i)] = zi - h;
      const double dn = penalized(zt, rho);
      zt[static_cast<std::size_t>(i)] = zi;
      grad[static_cast<std::size_t>(i)] = (up - dn) / (2.0 * h);
    }
  }

 private:
  void eval_constraints(std::span<const double> z) const {
    p_.constraints(z, g_buf_);
    for (double gi : g_buf_) {
      if (!std::isfinite(gi)) {
        throw NumericalFailure(
            "constraint is non-finite at " + format_point(z),
            {z.begin(), z.end()});
      }
    }
  }

  const NlpProblem& p_;
  const SolverOptions& opts_;
  mutable std::vector<double> g_buf_;
};

void project(std::vector<double>& z, const std::vector<double>& lo,
             const std::vector<double>& hi) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std::clamp(z[i], lo[i], hi[i]);
  }
}

// Projected-gradient KKT residual: components that push against an active
// bound do not count.
double projected_grad_norm(const std::vector<double>& z,
                           const std::vector<double>& grad,
                           const std::vector<double>& lo,
                           const std::vector<double>& hi) {
  double norm = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double gi = grad[i];
    if (z[i] <= lo[i] + kBoundTol) gi = std::min(gi, 0.0);
    if (z[i] >= hi[i] - kBoundTol) gi = std::max(gi, 0.0);
    norm = std::max(norm, std::fabs(gi));
  }
  return norm;
}

// Dense inverse-Hessian BFGS state.
class BfgsState {
 public:
  explicit BfgsState(int n) : n_(n) { reset(); }

  void reset() {
    h_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) at(i, i) = 1.0;
  }

  // d = -H * g
  void direction(const std::vector<double>& grad, std::vector<double>& d) const {
    d.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n_; ++j) acc += at(i, j) * grad[static_cast<std::size_t>(j)];
      d[static_cast<std::size_t>(i)] = -acc;
    }
  }

  void update(const std::vector<double>& s, const std::vector<double>& y) {
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (int i = 0; i < n_; ++i) {
      sy += s[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
      ss += s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
      yy += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    if (!(sy > 1e-12 * std::sqrt(ss * yy))) return;  // curvature too weak

    // H <- (I - r s y') H (I - r y s') + r s s'
    const double r = 1.0 / sy;
    std::vector<double> hy(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n_; ++j) acc += at(i, j) * y[static_cast<std::size_t>(j)];
      hy[static_cast<std::size_t>(i)] = acc;
    }
    double yhy = 0.0;
    for (int i = 0; i < n_; ++i) yhy += y[static_cast<std::size_t>(i)] * hy[static_cast<std::size_t>(i)];
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const double si = s[static_cast<std::size_t>(i)];
        const double sj = s[static_cast<std::size_t>(j)];
        at(i, j) += -r * (si * hy[static_cast<std::size_t>(j)] +
                          hy[static_cast<std::size_t>(i)] * sj) +
                    r * r * yhy * si * sj + r * si * sj;
      }
    }
  }

 private:
  double& at(int i, int j) { return h_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return h_[static_cast<std::size_t>(i) * n_ + j]; }

  int n_;
  std::vector<double> h_;
};

}  // namespace

NlpSolution solve(const NlpProblem& problem, std::span<const double> z0,
                  const SolverOptions& opts) {
  const int n = problem.dimension;
  const std::vector<double>& lo = problem.lower;
  const std::vector<double>& hi = problem.upper;

  std::vector<std::string> problems = opts.validate();
  if (n <= 0 || !problem.objective) {
    problems.push_back("problem must have a positive dimension and an objective");
  }
  if (lo.size() != static_cast<std::size_t>(n) ||
      hi.size() != static_cast<std::size_t>(n)) {
    problems.push_back("box bounds must match the problem dimension");
  } else {
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (!std::isfinite(lo[ui]) || !std::isfinite(hi[ui]) || lo[ui] > hi[ui]) {
        problems.push_back("box bounds must be finite with lower <= upper");
        break;
      }
    }
  }
  if (problem.num_constraints > 0 && !problem.constraints) {
    problems.push_back("num_constraints > 0 requires a constraint callback");
  }
  if (!problems.empty()) {
    throw ValidationError(std::move(problems));
  }

  PenalizedProblem pen(problem, opts);

  std::vector<double> z(z0.begin(), z0.end());
  z.resize(static_cast<std::size_t>(n), 0.0);
  project(z, lo, hi);
  const std::vector<double> z_start = z;

  double rho = opts.penalty_initial;
  const double phi0_initial = pen.penalized(z, rho);

  NlpSolution sol;
  sol.iteration_log.reserve(opts.record_iterations ? 64 : 0);

  BfgsState bfgs(n);
  std::vector<double> grad(static_cast<std::size_t>(n));
  std::vector<double> dir(static_cast<std::size_t>(n));
  std::vector<double> trial(static_cast<std::size_t>(n));
  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<double> ygrad(static_cast<std::size_t>(n));

  int total_iters = 0;
  bool out_of_budget = false;

  double phi = pen.penalized(z, rho);
  pen.gradient(z, rho, grad);
  double pg = projected_grad_norm(z, grad, lo, hi);

  while (true) {
    // Inner projected quasi-Newton descent at fixed penalty weight.
    bool stage_stationary = pg <= opts.tol;
    while (!stage_stationary) {
      if (total_iters >= opts.max_iter) {
        out_of_budget = true;
        break;
      }

      bfgs.direction(grad, dir);
      // Block coordinates pinned at a bound the step would violate further.
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if ((z[ui] <= lo[ui] + kBoundTol && dir[ui] < 0.0) ||
            (z[ui] >= hi[ui] - kBoundTol && dir[ui] > 0.0)) {
          dir[ui] = 0.0;
        }
      }
      double descent = 0.0, dnorm = 0.0, gnorm = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        descent += dir[ui] * grad[ui];
        dnorm += dir[ui] * dir[ui];
        gnorm += grad[ui] * grad[ui];
      }
      if (!(descent < -1e-14 * std::sqrt(dnorm * gnorm)) || dnorm == 0.0) {
        // Not a descent direction; fall back to projected steepest descent.
        bfgs.reset();
        for (int i = 0; i < n; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          dir[ui] = -grad[ui];
          if ((z[ui] <= lo[ui] + kBoundTol && dir[ui] < 0.0) ||
              (z[ui] >= hi[ui] - kBoundTol && dir[ui] > 0.0)) {
            dir[ui] = 0.0;
          }
        }
      }

      // Backtracking along the projection arc.
      double alpha = 1.0;
      bool accepted = false;
      double phi_trial = phi;
      for (int bt = 0; bt < 60; ++bt) {
        for (int i = 0; i < n; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          trial[ui] = z[ui] + alpha * dir[ui];
        }
        project(trial, lo, hi);
        double gdot = 0.0, moved = 0.0;
        for (int i = 0; i < n; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          const double di = trial[ui] - z[ui];
          gdot += grad[ui] * di;
          moved += di * di;
        }
        if (moved == 0.0) break;  // projection absorbed the whole step
        phi_trial = pen.penalized(trial, rho);
        if (phi_trial <= phi + kArmijoC1 * gdot) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        stage_stationary = true;  // no acceptable step; treat as converged
        break;
      }

      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        s[ui] = trial[ui] - z[ui];
      }
      z = trial;
      const double phi_new = phi_trial;
      pen.gradient(z, rho, ygrad);
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double tmp = ygrad[ui] - grad[ui];
        grad[ui] = ygrad[ui];
        ygrad[ui] = tmp;  // now holds y = g_new - g_old
        // Curvature is tracked in the free subspace only: a coordinate pinned
        // at its bound contributes no displacement, and letting its gradient
        // component into the update couples it to the free block.
        if (s[ui] == 0.0 &&
            (z[ui] <= lo[ui] + kBoundTol || z[ui] >= hi[ui] - kBoundTol)) {
          ygrad[ui] = 0.0;
        }
      }
      bfgs.update(s, ygrad);
      phi = phi_new;
      pg = projected_grad_norm(z, grad, lo, hi);
      ++total_iters;

      if (opts.record_iterations) {
        IterationRecord rec;
        rec.iter = total_iters;
        rec.objective = pen.objective(z);
        rec.violation = pen.violation(z);
        double slen = 0.0;
        for (double si : s) slen += si * si;
        rec.step_length = std::sqrt(slen);
        rec.grad_norm = pg;
        rec.penalized = phi;
        rec.penalty_weight = rho;
        sol.iteration_log.push_back(rec);
      }

      if (pg <= opts.tol) stage_stationary = true;
    }

    const double viol = pen.violation(z);
    if (out_of_budget) {
      sol.status = SolveStatus::kMaxIter;
      break;
    }
    if (viol <= opts.feas_tol) {
      // A stalled line search cannot certify stationarity to tol.
      sol.status = pg <= opts.tol ? SolveStatus::kConverged : SolveStatus::kMaxIter;
      break;
    }
    rho *= opts.penalty_growth;
    if (rho > kPenaltyMax) {
      sol.status = SolveStatus::kInfeasibleSoftened;
      break;
    }
    bfgs.reset();
    phi = pen.penalized(z, rho);
    pen.gradient(z, rho, grad);
    pg = projected_grad_norm(z, grad, lo, hi);
  }

  // The returned point must not be worse than the (penalized) start.
  if (pen.objective(z) > phi0_initial + 1e-12 * (1.0 + std::fabs(phi0_initial))) {
    const double phi_z = pen.penalized(z, opts.penalty_initial);
    if (phi_z > phi0_initial) {
      z = z_start;
      pen.gradient(z, rho, grad);
      pg = projected_grad_norm(z, grad, lo, hi);
      if (sol.status == SolveStatus::kConverged &&
          (pg > opts.tol || pen.violation(z) > opts.feas_tol)) {
        sol.status = SolveStatus::kMaxIter;
      }
    }
  }

  sol.z_opt = z;
  sol.objective_value = pen.objective(z);
  sol.max_constraint_violation = pen.violation(z);
  sol.stationarity_residual = pg;
  sol.iterations = total_iters;
  return sol;
}

double check_gradient(const NlpProblem& problem, std::span<const double> z,
                      const SolverOptions& opts) {
  const int n = problem.dimension;
  std::vector<double> zt(z.begin(), z.end());
  std::vector<double> g_solver(static_cast<std::size_t>(n), 0.0);

  auto central = [&](double h, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double zi = zt[ui];
      zt[ui] = zi + h;
      const double up = problem.objective(zt);
      zt[ui] = zi - h;
      const double dn = problem.objective(zt);
      zt[ui] = zi;
      if (!std::isfinite(up) || !std::isfinite(dn)) {
        throw NumericalFailure("objective is non-finite while differencing",
                               {z.begin(), z.end()});
      }
      out[ui] = (up - dn) / (2.0 * h);
    }
  };

  if (problem.gradient) {
    problem.gradient(z, g_solver);
  } else {
    central(opts.fd_step, g_solver);
  }
  std::vector<double> g_ref;
  central(opts.fd_step / 10.0, g_ref);

  double max_err = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double a = g_solver[ui];
    const double b = g_ref[ui];
    if (std::fabs(a) < 1e-12 && std::fabs(b) < 1e-12) continue;
    max_err = std::max(max_err, std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)));
  }
  return max_err;
}

}  // namespace ceco
