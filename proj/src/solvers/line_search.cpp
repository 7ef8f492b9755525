#include "solpath/solvers/line_search.hpp"

#include <algorithm>
#include <cmath>

namespace solpath {

LineSearchResult line_search_fast(const Vector& c, const Vector& anchor, const Vector& x_hat,
                                  const Matrix& rows, double b) {
  require_same_size(anchor.size(), c.size(), "line_search_fast: anchor");
  require_same_size(x_hat.size(), c.size(), "line_search_fast: x_hat");
  if (rows.rows() > 0) require_same_size(rows.cols(), c.size(), "line_search_fast: rows");

  const Vector base = rows * anchor;
  const double tol = 1e-12 * (1.0 + std::abs(b));
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    if (base(i) > b + tol) {
      throw Error(ErrorCode::InfeasibleAnchor,
                  "line_search_fast: anchor violates row " + std::to_string(i));
    }
  }

  const Vector dir = x_hat - anchor;
  LineSearchResult out;
  out.step = 0.0;
  if (c.dot(dir) < 0.0) {
    const Vector slope = rows * dir;
    double step = 1.0;
    for (Eigen::Index i = 0; i < slope.size(); ++i) {
      if (slope(i) > 0.0) step = std::min(step, std::max(0.0, (b - base(i)) / slope(i)));
    }
    out.step = step;
  }
  out.x = anchor + out.step * dir;
  return out;
}

}  // namespace solpath
