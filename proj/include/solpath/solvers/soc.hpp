#pragma once

#include "solpath/mathkit/linalg.hpp"
#include "solpath/mathkit/psd.hpp"
#include "solpath/solvers/lp.hpp"

namespace solpath {

// min c'x  s.t.  mu'x + kappa * ||L' x||_2 <= b,  with Sigma = L L'.
struct SocProblem {
  Vector c;
  Vector mu;
  double kappa = 0.0;
  PsdFactor factor;
  double b = 1.0;
};

struct SocSolution {
  SolveStatus status = SolveStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  // KKT multiplier of the cone constraint (Optimal only).
  double multiplier = 0.0;
  // Unbounded: c'ray < 0 and mu'ray + kappa ||L' ray|| <= 0.
  Vector ray;
  // Sigma was rank deficient; solved on its range with a pseudo-inverse.
  bool used_pseudo_inverse = false;
};

// Scalar dual root finding: psi(l) = ||c + l mu||_{Sigma^-1} - l kappa is
// convex with at most two positive roots; the admissible one yields a
// positive scale ||L'x||.
SocSolution solve_single_soc(const SocProblem& prob);

// |mu'x + kappa ||L'x|| - b|
double soc_constraint_residual(const SocProblem& prob, const Vector& x);
// ||c + l (mu + kappa Sigma x / ||L'x||)||
double soc_stationarity_residual(const SocProblem& prob, const Vector& x, double multiplier);

}  // namespace solpath
