#pragma once

#include "solpath/mathkit/linalg.hpp"

namespace solpath {

struct LineSearchResult {
  double step = 0.0;
  Vector x;
};

// Second stage of FAST: min over s in [0,1] of c'((1-s) x_o + s x_hat)
// subject to xi_i'x <= b for every row xi_i of `rows`.
// Throws InfeasibleAnchor when x_o violates a row.
LineSearchResult line_search_fast(const Vector& c, const Vector& anchor, const Vector& x_hat,
                                  const Matrix& rows, double b);

}  // namespace solpath
