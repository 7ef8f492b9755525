#include "solpath/solvers/soc.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace solpath {
namespace {

constexpr double kHuge = 1e200;

// Whitened coordinates w = L'x. `to_w` maps a vector v in x-space to L^+ v
// (so that v'x = (L^+ v)'w on the range of Sigma); `to_x` maps w back.
struct Whitening {
  Matrix factor;
  bool triangular = false;
  Eigen::LDLT<Eigen::MatrixXd> gram;
  bool pseudo = false;

  explicit Whitening(const PsdFactor& f) : factor(f.factor) {
    const auto d = factor.rows();
    const auto r = factor.cols();
    if (r == d && factor.isLowerTriangular(0.0)) {
      bool ok = true;
      for (Eigen::Index i = 0; i < d; ++i) ok = ok && factor(i, i) != 0.0;
      triangular = ok;
    }
    if (!triangular) {
      pseudo = r < d;
      gram.compute(Eigen::MatrixXd(factor.transpose() * factor));
    }
  }

  Vector to_w(const Vector& v) const {
    if (triangular) return factor.triangularView<Eigen::Lower>().solve(v);
    return gram.solve(Eigen::VectorXd(factor.transpose() * v));
  }

  // x = L^{+T} w: the minimum-norm x with L'x = w.
  Vector to_x(const Vector& w) const {
    if (triangular) return factor.transpose().triangularView<Eigen::Upper>().solve(w);
    return factor * gram.solve(Eigen::VectorXd(w));
  }
};

struct Root {
  double lambda;
  double scale;
};

}  // namespace

double soc_constraint_residual(const SocProblem& prob, const Vector& x) {
  return std::abs(prob.mu.dot(x) + prob.kappa * prob.factor.apply_transpose(x).norm() - prob.b);
}

double soc_stationarity_residual(const SocProblem& prob, const Vector& x, double multiplier) {
  const Vector w = prob.factor.apply_transpose(x);
  const double r = w.norm();
  Vector g = prob.c + multiplier * prob.mu;
  if (r > 0.0) g += multiplier * prob.kappa * (prob.factor.factor * w) / r;
  return g.norm();
}

SocSolution solve_single_soc(const SocProblem& prob) {
  const auto d = prob.c.size();
  require_same_size(prob.mu.size(), d, "solve_single_soc: mu");
  require_same_size(prob.factor.factor.rows(), d, "solve_single_soc: factor");
  if (!(prob.b > 0.0)) throw Error(ErrorCode::OutOfRange, "solve_single_soc: b must be positive");
  if (!(prob.kappa >= 0.0)) throw Error(ErrorCode::OutOfRange, "solve_single_soc: kappa must be >= 0");
  if (prob.c.squaredNorm() == 0.0) throw Error(ErrorCode::OutOfRange, "solve_single_soc: c must be nonzero");
  if (prob.factor.factor.cols() == 0) {
    throw Error(ErrorCode::SingularCovariance, "solve_single_soc: zero covariance");
  }

  const Whitening wh(prob.factor);
  const Vector cw = wh.to_w(prob.c);
  const Vector mw = wh.to_w(prob.mu);
  if (wh.pseudo) {
    // Directions in the null space of Sigma move c'x or mu'x without touching
    // the cone term; the problem is then not well posed on the range.
    const auto outside = [&](const Vector& v, const Vector& vw) {
      return (v - prob.factor.factor * vw).norm() > 1e-9 * (1.0 + v.norm());
    };
    if (outside(prob.c, cw) || outside(prob.mu, mw)) {
      throw Error(ErrorCode::SingularCovariance,
                  "solve_single_soc: covariance is rank deficient along c or mu");
    }
  }

  SocSolution out;
  out.used_pseudo_inverse = wh.pseudo;
  const double kappa = prob.kappa;
  const double b = prob.b;

  auto certificate = [&]() -> std::optional<Vector> {
    const double mnorm = mw.norm();
    const double cnorm = cw.norm();
    std::vector<Vector> candidates;
    candidates.push_back(-cw / cnorm);
    if (mnorm > 0.0) {
      const Vector axis = -mw / mnorm;
      const double cos_t = std::min(1.0, kappa / mnorm);
      const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
      Vector perp = -cw - (-cw).dot(axis) * axis;
      if (perp.norm() > 1e-14 * cnorm) {
        perp /= perp.norm();
        candidates.push_back(cos_t * axis + sin_t * perp);
      }
      candidates.push_back(axis);
    }
    for (const Vector& u : candidates) {
      const Vector ux = wh.to_x(u);
      const double cu = prob.c.dot(ux);
      const double cone = prob.mu.dot(ux) + kappa * prob.factor.apply_transpose(ux).norm();
      if (cu < 0.0 && cone <= 1e-12 * ux.norm() * (1.0 + prob.mu.norm())) return ux;
    }
    return std::nullopt;
  };

  auto unbounded = [&]() {
    auto ray = certificate();
    if (!ray) throw Error(ErrorCode::NumericalBreakdown, "solve_single_soc: no root and no certificate");
    out.status = SolveStatus::Unbounded;
    out.ray = std::move(*ray);
    out.objective = -std::numeric_limits<double>::infinity();
    return out;
  };

  if (kappa == 0.0) {
    // Half-space: bounded only when c = -t mu with t > 0.
    const double t = -cw.dot(mw) / std::max(mw.squaredNorm(), std::numeric_limits<double>::min());
    if (t > 0.0 && (cw + t * mw).norm() <= 1e-12 * cw.norm()) {
      const Vector w = (b / mw.squaredNorm()) * mw;
      out.status = SolveStatus::Optimal;
      out.x = wh.to_x(w);
      out.objective = prob.c.dot(out.x);
      out.multiplier = t;
      return out;
    }
    return unbounded();
  }

  auto psi = [&](double lambda) { return (cw + lambda * mw).norm() - lambda * kappa; };
  auto scale_at = [&](double lambda) {
    const Vector u = -(cw + lambda * mw) / (lambda * kappa);
    const double denom = mw.dot(u) + kappa;
    return denom > 0.0 ? b / denom : -1.0;
  };
  // psi(lo) > 0 >= psi(hi) or the reverse; converges to machine precision.
  auto bisect = [&](double lo, double hi) {
    const bool decreasing = psi(lo) > 0.0;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const bool positive = psi(mid) > 0.0;
      if (positive == decreasing) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  auto golden_min = [&](double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = psi(x1);
    double f2 = psi(x2);
    for (int it = 0; it < 400 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = psi(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = psi(x2);
      }
    }
    return f1 <= f2 ? x1 : x2;
  };

  // Bracket either a negative value of psi or its minimizer.
  double upper = std::max(1.0, cw.norm() / std::max(mw.norm(), kappa));
  double negative_at = -1.0;
  double minimizer = -1.0;
  while (upper < kHuge) {
    const double f = psi(upper);
    if (f < 0.0) {
      negative_at = upper;
      break;
    }
    if (psi(2.0 * upper) >= f) {
      minimizer = golden_min(0.0, 2.0 * upper);
      if (psi(minimizer) < 0.0) negative_at = minimizer;
      break;
    }
    upper *= 2.0;
  }
  if (negative_at < 0.0) return unbounded();

  std::vector<Root> roots;
  const double first = bisect(0.0, negative_at);
  roots.push_back({first, scale_at(first)});
  double far = negative_at;
  while (far < kHuge && psi(far) <= 0.0) far *= 2.0;
  if (psi(far) > 0.0) {
    const double second = bisect(negative_at, far);
    roots.push_back({second, scale_at(second)});
  }

  const Root* best = nullptr;
  for (const Root& root : roots) {
    if (root.scale > 0.0 && std::isfinite(root.scale)) {
      if (!best) best = &root;
    }
  }
  if (!best) return unbounded();

  const Vector w = -(best->scale / (best->lambda * kappa)) * (cw + best->lambda * mw);
  out.status = SolveStatus::Optimal;
  out.x = wh.to_x(w);
  out.objective = prob.c.dot(out.x);
  out.multiplier = best->lambda;
  return out;
}

}  // namespace solpath
