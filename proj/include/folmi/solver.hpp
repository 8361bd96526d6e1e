#pragma once

#include <functional>
#include <limits>
#include <string>

#include "folmi/lmi.hpp"

namespace folmi {

enum class SolveStatus { Feasible, Infeasible, NumericalFailure };

struct SolveOptions {
  double gap_tol = 1e-10;        // barrier duality-gap target (scaled by degree)
  double t_cap = 1e6;            // upper cap on the slack variable
  double x_cap = 1e7;            // symmetric bound on every scalar component
  int max_newton = 600;          // total Newton iterations across the path
  double accept_slack = 0.0;     // feasible iff t* >= accept_slack
  bool classify_early_exit = false;  // stop as soon as feasibility is decided
  Vector objective;              // optional phase-2 linear objective (min c'x)
  double objective_slack_floor = std::numeric_limits<double>::quiet_NaN();
  // when objective is set: required slack kept during phase 2; NaN means
  // half of the phase-1 optimum (capped at 0.1)
  Vector warm_start;             // optional initial x
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Assignment assignment;
  double t_star = -std::numeric_limits<double>::infinity();
  int newton_iterations = 0;
  std::string message;
};

/// Reference feasibility backend: maximizes the uniform extra slack t over
/// all constraints (each already carrying its sense margin), by a log-det
/// barrier path-following method; optionally follows with a linear-objective
/// minimization phase at a fixed slack floor.
SolveResult solve_feasibility(const LmiProblem& p, const SolveOptions& opts = {});

}  // namespace folmi
