#pragma once

#include <span>

#include "solpath/mathkit/linalg.hpp"

namespace solpath {

struct Moments {
  Vector mean;
  Matrix cov;
};

// Column means and covariance of an n x p sample with divisor n (not n-1).
Moments mean_and_cov(const Matrix& rows);

// k-th smallest value (1-based), duplicates kept.
double empirical_quantile(std::span<const double> values, int k);

}  // namespace solpath
