#include "solpath/mathkit/moments.hpp"

#include <algorithm>
#include <vector>

namespace solpath {

Moments mean_and_cov(const Matrix& rows) {
  if (rows.rows() == 0) throw Error(ErrorCode::EmptyInput, "mean_and_cov: no rows");
  const double n = static_cast<double>(rows.rows());
  Moments out;
  out.mean = rows.colwise().sum().transpose() / n;
  const Matrix centered = rows.rowwise() - out.mean.transpose();
  out.cov = centered.transpose() * centered / n;
  return out;
}

double empirical_quantile(std::span<const double> values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) {
    throw Error(ErrorCode::OutOfRange, "empirical_quantile: k=" + std::to_string(k) +
                                           " outside [1," + std::to_string(values.size()) + "]");
  }
  std::vector<double> copy(values.begin(), values.end());
  auto nth = copy.begin() + (k - 1);
  std::nth_element(copy.begin(), nth, copy.end());
  return *nth;
}

}  // namespace solpath
