#pragma once

#include <vector>

#include "solpath/mathkit/linalg.hpp"

namespace solpath {

enum class SolveStatus { Optimal, Infeasible, Unbounded };

const char* to_string(SolveStatus status);

// min c'x  s.t.  A x <= b,  lo <= x <= hi.
// Empty lo/hi mean unbounded in that direction; entries may be +-infinity.
struct LpProblem {
  Vector c;
  Matrix a;
  Vector b;
  Vector lo;
  Vector hi;
};

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  std::vector<bool> at_bound;
  // Unbounded: a direction with A ray <= 0, inside the box recession cone, c'ray < 0.
  Vector ray;
  int iterations = 0;
};

// Dense two-phase tableau simplex with Bland's rule.
LpSolution solve_lp(const LpProblem& prob);

}  // namespace solpath
