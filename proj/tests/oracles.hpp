#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Two-pass covariance with divisor n, plain loops.
inline void naive_mean_cov(const std::vector<std::vector<double>>& rows, std::vector<double>& mean,
                           std::vector<std::vector<double>>& cov) {
  const std::size_t n = rows.size(), p = rows[0].size();
  mean.assign(p, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < p; ++j) mean[j] += r[j];
  for (auto& m : mean) m /= static_cast<double>(n);
  cov.assign(p, std::vector<double>(p, 0.0));
  for (const auto& r : rows)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < p; ++b) cov[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]);
  for (auto& row : cov)
    for (auto& v : row) v /= static_cast<double>(n);
}

struct LpOracleResult {
  enum class Status { Optimal, Infeasible, Unbounded } status;
  double objective = 0.0;
};

// min c'x s.t. G x <= h, where the rows of G include x >= 0 so the feasible
// set is pointed. Enumerates every d-subset of rows as a candidate vertex and
// every (d-1)-subset as a candidate extreme ray.
inline LpOracleResult enumerate_lp(const Eigen::MatrixXd& g, const Eigen::VectorXd& h, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  const double tol = 1e-9;
  std::vector<int> idx;
  bool feasible = false;
  double best = std::numeric_limits<double>::infinity();

  auto for_subsets = [&](int k, auto&& fn) {
    std::vector<int> sel(k);
    for (int i = 0; i < k; ++i) sel[i] = i;
    if (k > m) return;
    while (true) {
      fn(sel);
      int i = k - 1;
      while (i >= 0 && sel[i] == m - k + i) --i;
      if (i < 0) break;
      ++sel[i];
      for (int j = i + 1; j < k; ++j) sel[j] = sel[j - 1] + 1;
    }
  };

  for_subsets(d, [&](const std::vector<int>& sel) {
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd r(d);
    for (int i = 0; i < d; ++i) {
      a.row(i) = g.row(sel[i]);
      r(i) = h(sel[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < d) return;
    const Eigen::VectorXd x = lu.solve(r);
    if (((g * x - h).array() > tol * (1.0 + h.cwiseAbs().maxCoeff())).any()) return;
    feasible = true;
    best = std::min(best, c.dot(x));
  });
  if (!feasible) return {LpOracleResult::Status::Infeasible, 0.0};

  bool unbounded = false;
  if (d == 1) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd u(1);
      u(0) = sign;
      if (((g * u).array() <= tol).all() && c.dot(u) < -tol) unbounded = true;
    }
  } else {
    for_subsets(d - 1, [&](const std::vector<int>& sel) {
      Eigen::MatrixXd a(d - 1, d);
      for (int i = 0; i < d - 1; ++i) a.row(i) = g.row(sel[i]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < d - 1) return;
      const Eigen::MatrixXd ker = lu.kernel();
      if (ker.cols() != 1) return;
      for (double sign : {1.0, -1.0}) {
        const Eigen::VectorXd u = sign * ker.col(0) / ker.col(0).norm();
        if (((g * u).array() <= tol).all() && c.dot(u) < -tol) unbounded = true;
      }
    });
  }
  if (unbounded) return {LpOracleResult::Status::Unbounded, 0.0};
  return {LpOracleResult::Status::Optimal, best};
}

// Binary KL written with log1p and a separate boundary treatment.
inline double kl_bernoulli(double q, double p) {
  double out = 0.0;
  if (q > 0.0) out += q * (std::log(q) - std::log(p));
  if (q < 1.0) out += (1.0 - q) * (std::log1p(-q) - std::log1p(-p));
  return out;
}

// Smallest q in [0, p] with KL(q||p) <= s: locate the crossing on a fine grid,
// then bisect inside the bracketing cell.
inline double kl_inverse_by_grid(double p, double s) {
  if (s == 0.0 || p == 0.0) return p;
  if (p == 1.0) return 1.0;
  const int cells = 20000;
  double lo = 0.0, hi = p;
  if (kl_bernoulli(0.0, p) <= s) return 0.0;
  for (int k = cells - 1; k >= 0; --k) {
    const double q = p * k / cells;
    if (kl_bernoulli(q, p) > s) {
      lo = q;
      hi = p * (k + 1) / cells;
      break;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (kl_bernoulli(mid, p) > s ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace oracle
