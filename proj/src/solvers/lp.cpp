#include "solpath/solvers/lp.hpp"

#include <cmath>
#include <limits>

namespace solpath {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr double kWeakPivot = 1e-9;

// x_j = offset_j + sum_k map(j, k) y_k with y >= 0.
struct VariableMap {
  Vector offset;
  Matrix map;  // d x ny
  std::vector<std::pair<int, double>> upper_rows;  // (y column, bound) for finite boxes
};

VariableMap build_map(const Vector& lo, const Vector& hi, int d) {
  VariableMap vm;
  vm.offset = Vector::Zero(d);
  std::vector<std::pair<int, double>> cols;  // (coordinate, sign)
  for (int j = 0; j < d; ++j) {
    const double l = lo.size() ? lo(j) : -kInf;
    const double h = hi.size() ? hi(j) : kInf;
    if (l > h) throw Error(ErrorCode::OutOfRange, "solve_lp: lo > hi at coordinate " + std::to_string(j));
    if (std::isfinite(l)) {
      vm.offset(j) = l;
      if (std::isfinite(h)) vm.upper_rows.emplace_back(static_cast<int>(cols.size()), h - l);
      cols.emplace_back(j, 1.0);
    } else if (std::isfinite(h)) {
      vm.offset(j) = h;
      cols.emplace_back(j, -1.0);
    } else {
      cols.emplace_back(j, 1.0);
      cols.emplace_back(j, -1.0);
    }
  }
  vm.map = Matrix::Zero(d, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) vm.map(cols[k].first, static_cast<Eigen::Index>(k)) = cols[k].second;
  return vm;
}

class Tableau {
 public:
  // rows: constraint rows, then objective row(s) appended by the caller.
  Tableau(Matrix body, std::vector<int> basis) : t_(std::move(body)), basis_(std::move(basis)) {}

  Matrix& data() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(basis_.size()); }
  int rhs() const { return static_cast<int>(t_.cols()) - 1; }

  void pivot(int r, int col) {
    const double piv = t_(r, col);
    t_.row(r) /= piv;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = col;
  }

  enum class Outcome { Optimal, Unbounded };

  // Minimizes the objective stored in row `obj_row` (reduced costs) over
  // columns [0, allowed_cols). Returns the entering column when unbounded.
  Outcome run(int obj_row, int allowed_cols, int& unbounded_col, int& iterations) {
    int weak = 0;
    for (;;) {
      if (++iterations > 100000) throw Error(ErrorCode::NumericalBreakdown, "solve_lp: iteration cap");
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(obj_row, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::Optimal;
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(i, rhs()) / a;
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        unbounded_col = enter;
        return Outcome::Unbounded;
      }
      if (t_(leave, enter) < kWeakPivot && ++weak > 20) {
        throw Error(ErrorCode::NumericalBreakdown, "solve_lp: repeated tiny pivots");
      }
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob) {
  const int d = static_cast<int>(prob.c.size());
  const int m0 = static_cast<int>(prob.a.rows());
  if (prob.a.cols() != d && m0 > 0) throw Error(ErrorCode::DimensionMismatch, "solve_lp: A columns vs c");
  require_same_size(prob.b.size(), m0, "solve_lp: b vs A rows");
  if (prob.lo.size()) require_same_size(prob.lo.size(), d, "solve_lp: lo");
  if (prob.hi.size()) require_same_size(prob.hi.size(), d, "solve_lp: hi");

  const VariableMap vm = build_map(prob.lo, prob.hi, d);
  const int ny = static_cast<int>(vm.map.cols());
  const int m = m0 + static_cast<int>(vm.upper_rows.size());

  // Rows in y-space: G y <= r.
  Matrix g = Matrix::Zero(m, ny);
  Vector r(m);
  if (m0 > 0) {
    g.topRows(m0) = prob.a * vm.map;
    r.head(m0) = prob.b - prob.a * vm.offset;
  }
  for (std::size_t k = 0; k < vm.upper_rows.size(); ++k) {
    g(m0 + static_cast<int>(k), vm.upper_rows[k].first) = 1.0;
    r(m0 + static_cast<int>(k)) = vm.upper_rows[k].second;
  }
  const Vector cy = vm.map.transpose() * prob.c;

  // Columns: y (ny), slacks (m), artificials (one per negative-rhs row), rhs.
  std::vector<int> needs_art;
  for (int i = 0; i < m; ++i) {
    if (r(i) < 0.0) needs_art.push_back(i);
  }
  const int n_art = static_cast<int>(needs_art.size());
  const int n_struct = ny + m;
  const int cols = n_struct + n_art + 1;
  Matrix body = Matrix::Zero(m + 2, cols);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const double sign = r(i) < 0.0 ? -1.0 : 1.0;
    body.row(i).head(ny) = sign * g.row(i);
    body(i, ny + i) = sign;
    body(i, cols - 1) = sign * r(i);
    basis[i] = ny + i;
  }
  for (int k = 0; k < n_art; ++k) {
    const int i = needs_art[k];
    body(i, n_struct + k) = 1.0;
    basis[i] = n_struct + k;
  }
  const int obj2 = m;      // phase-two objective row
  const int obj1 = m + 1;  // phase-one objective row
  body.row(obj2).head(ny) = cy.transpose();
  for (int k = 0; k < n_art; ++k) {
    body.row(obj1) -= body.row(needs_art[k]);
    body(obj1, n_struct + k) = 0.0;
  }

  Tableau tab(std::move(body), std::move(basis));
  LpSolution sol;
  const double feas_tol = 1e-9 * (1.0 + (r.size() ? r.cwiseAbs().maxCoeff() : 0.0));

  if (n_art > 0) {
    int unb = -1;
    tab.run(obj1, n_struct + n_art, unb, sol.iterations);
    if (-tab.data()(obj1, tab.rhs()) > feas_tol) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    // Drive artificials out; rows where that is impossible are redundant.
    std::vector<int> keep;
    for (int i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] >= n_struct) {
        int col = -1;
        for (int j = 0; j < n_struct; ++j) {
          if (std::abs(tab.data()(i, j)) > 1e-9) {
            col = j;
            break;
          }
        }
        if (col >= 0) tab.pivot(i, col);
      }
    }
    for (int i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] < n_struct) keep.push_back(i);
    }
    if (static_cast<int>(keep.size()) < tab.rows()) {
      Matrix reduced(static_cast<Eigen::Index>(keep.size()) + 2, tab.data().cols());
      std::vector<int> new_basis;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        reduced.row(static_cast<Eigen::Index>(k)) = tab.data().row(keep[k]);
        new_basis.push_back(tab.basis()[keep[k]]);
      }
      reduced.row(static_cast<Eigen::Index>(keep.size())) = tab.data().row(obj2);
      reduced.row(static_cast<Eigen::Index>(keep.size()) + 1) = tab.data().row(obj1);
      tab = Tableau(std::move(reduced), std::move(new_basis));
    }
  }

  const int obj_row = tab.rows();
  int unb = -1;
  const auto outcome = tab.run(obj_row, n_struct, unb, sol.iterations);

  Vector y = Vector::Zero(n_struct);
  for (int i = 0; i < tab.rows(); ++i) {
    if (tab.basis()[i] < n_struct) y(tab.basis()[i]) = tab.data()(i, tab.rhs());
  }
  sol.x = vm.offset + vm.map * y.head(ny);

  if (outcome == Tableau::Outcome::Unbounded) {
    Vector dy = Vector::Zero(n_struct);
    dy(unb) = 1.0;
    for (int i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] < n_struct) dy(tab.basis()[i]) = -tab.data()(i, unb);
    }
    sol.status = SolveStatus::Unbounded;
    sol.ray = vm.map * dy.head(ny);
    sol.objective = -kInf;
    return sol;
  }

  sol.status = SolveStatus::Optimal;
  sol.objective = prob.c.dot(sol.x);
  sol.at_bound.assign(d, false);
  for (int j = 0; j < d; ++j) {
    const double l = prob.lo.size() ? prob.lo(j) : -kInf;
    const double h = prob.hi.size() ? prob.hi(j) : kInf;
    const auto near = [&](double v) { return std::isfinite(v) && std::abs(sol.x(j) - v) <= 1e-9 * (1.0 + std::abs(v)); };
    sol.at_bound[j] = near(l) || near(h);
  }
  return sol;
}

}  // namespace solpath
