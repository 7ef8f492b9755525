#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "solpath/mathkit/psd.hpp"
#include "solpath/mathkit/rng.hpp"
#include "solpath/solvers/line_search.hpp"
#include "solpath/solvers/lp.hpp"
#include "solpath/solvers/soc.hpp"

using namespace solpath;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

SocProblem soc(Vector c, Vector mu, double kappa, const Matrix& sigma, double b) {
  return SocProblem{std::move(c), std::move(mu), kappa, cholesky_psd(sigma), b};
}

}  // namespace

TEST_CASE("solve_lp small cases") {
  LpProblem lp;
  lp.c = vec({-1, -2});
  lp.a = Matrix(3, 2);
  lp.a << 1, 0, 0, 1, 1, 1;
  lp.b = vec({1, 1, 1.5});
  lp.lo = Vector::Zero(2);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::abs(sol.x(0) - 0.5) <= 1e-12);
  CHECK(std::abs(sol.x(1) - 1.0) <= 1e-12);
  CHECK(std::abs(sol.objective + 2.5) <= 1e-12);

  LpProblem infeasible;
  infeasible.c = vec({1});
  infeasible.a = Matrix(2, 1);
  infeasible.a << 1, -1;
  infeasible.b = vec({-1, 0});
  CHECK(solve_lp(infeasible).status == SolveStatus::Infeasible);

  LpProblem unbounded;
  unbounded.c = vec({-1});
  unbounded.a = Matrix(1, 1);
  unbounded.a << -1;
  unbounded.b = vec({0});
  const auto ray = solve_lp(unbounded);
  REQUIRE(ray.status == SolveStatus::Unbounded);
  CHECK(ray.ray(0) > 0.0);

  LpProblem boxed;
  boxed.c = vec({-1, 1});
  boxed.a = Matrix(0, 2);
  boxed.b = Vector(0);
  boxed.lo = vec({-3, -4});
  boxed.hi = vec({2, 5});
  const auto box_sol = solve_lp(boxed);
  REQUIRE(box_sol.status == SolveStatus::Optimal);
  CHECK(box_sol.x(0) == doctest::Approx(2.0));
  CHECK(box_sol.x(1) == doctest::Approx(-4.0));
  CHECK(box_sol.at_bound[0]);
  CHECK(box_sol.at_bound[1]);
}

TEST_CASE("solve_lp matches vertex enumeration on random instances") {
  RngStream rng(2024, 0);
  int mismatches = 0, optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    const int m = 1 + static_cast<int>(rng.next_u64() % 8);
    Matrix a(m, d);
    Vector b(m), c(d);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = std::round(8.0 * rng.uniform() - 4.0) + 0.25 * rng.uniform();
      b(i) = std::round(10.0 * rng.uniform() - 3.0);
    }
    for (int j = 0; j < d; ++j) c(j) = std::round(6.0 * rng.uniform() - 3.0) + 0.1;

    // oracle sees x >= 0 as explicit rows
    Eigen::MatrixXd g(m + d, d);
    Eigen::VectorXd h(m + d);
    g.topRows(m) = a;
    h.head(m) = b;
    g.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
    h.tail(d).setZero();
    const auto expect = oracle::enumerate_lp(g, h, c);

    LpProblem lp;
    lp.c = c;
    if (trial % 2 == 0) {
      lp.a = a;
      lp.b = b;
      lp.lo = Vector::Zero(d);
    } else {
      lp.a = g;
      lp.b = h;
    }
    const auto got = solve_lp(lp);
    bool ok = false;
    switch (expect.status) {
      case oracle::LpOracleResult::Status::Optimal:
        ++optimal;
        ok = got.status == SolveStatus::Optimal && std::abs(got.objective - expect.objective) <= 1e-8;
        if (ok) CHECK(((a * got.x - b).array() <= 1e-8 * (1.0 + b.cwiseAbs().maxCoeff())).all());
        break;
      case oracle::LpOracleResult::Status::Infeasible:
        ++infeasible;
        ok = got.status == SolveStatus::Infeasible;
        break;
      case oracle::LpOracleResult::Status::Unbounded:
        ++unbounded;
        ok = got.status == SolveStatus::Unbounded;
        if (ok) {
          CHECK(c.dot(got.ray) < 0.0);
          CHECK(((g * got.ray).array() <= 1e-9).all());
        }
        break;
    }
    if (!ok) ++mismatches;
  }
  CHECK(mismatches == 0);
  // the generator exercises every status
  CHECK(optimal > 20);
  CHECK(infeasible > 5);
  CHECK(unbounded > 5);
}

TEST_CASE("solve_single_soc hand-KKT cases") {
  SUBCASE("ball") {
    const auto sol = solve_single_soc(soc(vec({-1, 0, 0}), Vector::Zero(3), 1.0, Matrix::Identity(3, 3), 2.0));
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK((sol.x - vec({2, 0, 0})).norm() <= 1e-12);
    CHECK(std::abs(sol.objective + 2.0) <= 1e-12);
  }
  SUBCASE("kappa 2: x = (1/3, 0)") {
    const auto prob = soc(vec({-1, 0}), vec({1, 0}), 2.0, Matrix::Identity(2, 2), 1.0);
    const auto sol = solve_single_soc(prob);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK((sol.x - vec({1.0 / 3.0, 0})).norm() <= 1e-8);
    CHECK(std::abs(sol.objective + 1.0 / 3.0) <= 1e-8);
  }
  SUBCASE("kappa 0.5: x = (2/3, 0), spurious root rejected") {
    const auto prob = soc(vec({-1, 0}), vec({1, 0}), 0.5, Matrix::Identity(2, 2), 1.0);
    const auto sol = solve_single_soc(prob);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK((sol.x - vec({2.0 / 3.0, 0})).norm() <= 1e-8);
    CHECK(std::abs(sol.objective + 2.0 / 3.0) <= 1e-8);
    CHECK(std::abs(sol.multiplier - 2.0 / 3.0) <= 1e-8);
  }
  SUBCASE("unbounded with certificate") {
    // ||mu|| > kappa and c points into the recession cone
    const auto prob = soc(vec({1, 0}), vec({1, 0}), 0.5, Matrix::Identity(2, 2), 1.0);
    const auto sol = solve_single_soc(prob);
    REQUIRE(sol.status == SolveStatus::Unbounded);
    CHECK(prob.c.dot(sol.ray) < 0.0);
    CHECK(prob.mu.dot(sol.ray) + prob.kappa * sol.ray.norm() <= 1e-12);
  }
  SUBCASE("singular covariance along c") {
    Matrix sigma = Matrix::Zero(2, 2);
    sigma(0, 0) = 1.0;
    SocProblem prob{vec({0, -1}), Vector::Zero(2), 1.0, cholesky_psd(sigma), 1.0};
    CHECK_THROWS_AS(solve_single_soc(prob), Error);
    SocProblem on_range{vec({-1, 0}), Vector::Zero(2), 1.0, cholesky_psd(sigma), 1.0};
    const auto sol = solve_single_soc(on_range);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.used_pseudo_inverse);
    CHECK(std::abs(sol.objective + 1.0) <= 1e-12);
  }
}

TEST_CASE("solve_single_soc residuals on random instances") {
  RngStream rng(99, 0);
  int checked = 0;
  double worst_con = 0.0, worst_stat = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 8);
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
    Matrix sigma = a * a.transpose() / d;
    sigma.diagonal().array() += 0.05;
    Vector mu(d), c(d);
    for (int j = 0; j < d; ++j) {
      mu(j) = rng.normal();
      c(j) = rng.normal();
    }
    const PsdFactor f = cholesky_psd(sigma);
    // whitened mean norm below kappa keeps the problem bounded
    const double mu_w = f.factor.triangularView<Eigen::Lower>().solve(mu).norm();
    const double kappa = mu_w * (1.05 + 2.0 * rng.uniform()) + 0.1;
    SocProblem prob{c, mu, kappa, f, 0.2 + 3.0 * rng.uniform()};
    const auto sol = solve_single_soc(prob);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double con = soc_constraint_residual(prob, sol.x);
    const double stat = soc_stationarity_residual(prob, sol.x, sol.multiplier);
    worst_con = std::max(worst_con, con / (1.0 + prob.b));
    worst_stat = std::max(worst_stat, stat / c.norm());
    ++checked;
  }
  CHECK(checked == 500);
  CHECK(worst_con <= 1e-9);
  CHECK(worst_stat <= 1e-8);
}

TEST_CASE("solve_single_soc unbounded certificates on random instances") {
  RngStream rng(7, 3);
  int unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 5);
    Vector mu(d), c(d);
    for (int j = 0; j < d; ++j) {
      mu(j) = 2.0 * rng.normal();
      c(j) = rng.normal();
    }
    SocProblem prob{c, mu, 0.3 + rng.uniform(), cholesky_psd(Matrix::Identity(d, d)), 1.0};
    const auto sol = solve_single_soc(prob);
    if (sol.status == SolveStatus::Unbounded) {
      ++unbounded;
      CHECK(c.dot(sol.ray) < 0.0);
      CHECK(mu.dot(sol.ray) + prob.kappa * sol.ray.norm() <= 1e-10 * sol.ray.norm());
    } else {
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(soc_constraint_residual(prob, sol.x) <= 1e-9 * (1.0 + prob.b));
      CHECK(soc_stationarity_residual(prob, sol.x, sol.multiplier) <= 1e-8 * c.norm());
    }
  }
  CHECK(unbounded > 10);
}

TEST_CASE("solve_single_soc objective is nondecreasing in kappa") {
  for (int seed = 0; seed < 20; ++seed) {
    RngStream rng(static_cast<std::uint64_t>(seed), 11);
    const int d = 4;
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
    Matrix sigma = a * a.transpose() / d + 0.1 * Matrix::Identity(d, d);
    Vector mu(d), c(d);
    for (int j = 0; j < d; ++j) {
      mu(j) = 0.2 * rng.normal();
      c(j) = rng.normal();
    }
    const PsdFactor f = cholesky_psd(sigma);
    const double mu_w = f.factor.triangularView<Eigen::Lower>().solve(mu).norm();
    double prev = -1e300;
    for (double kappa = mu_w + 0.05; kappa <= mu_w + 8.0; kappa += 0.25) {
      const auto sol = solve_single_soc(SocProblem{c, mu, kappa, f, 1.5});
      REQUIRE(sol.status == SolveStatus::Optimal);
      CHECK(sol.objective >= prev - 1e-10);
      prev = sol.objective;
    }
  }
}

TEST_CASE("line_search_fast") {
  // rows chosen so xi_i'x_hat = 2, 0.5, -3 with x_hat = e1
  Matrix rows(3, 2);
  rows << 2, 0, 0.5, 1, -3, 0;
  const Vector c = vec({-1, 0});
  const auto r = line_search_fast(c, Vector::Zero(2), vec({1, 0}), rows, 1.0);
  CHECK(r.step == 0.5);
  CHECK((r.x - vec({0.5, 0})).norm() == 0.0);

  Matrix nonpos(2, 2);
  nonpos << -1, 0, 0, 1;
  CHECK(line_search_fast(c, Vector::Zero(2), vec({1, 0}), nonpos, 1.0).step == 1.0);

  const auto none = line_search_fast(vec({1, 0}), Vector::Zero(2), vec({1, 0}), rows, 1.0);
  CHECK(none.step == 0.0);
  CHECK(none.x == Vector::Zero(2));

  try {
    line_search_fast(c, vec({1, 0}), vec({2, 0}), rows, 1.0);
    FAIL("expected InfeasibleAnchor");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleAnchor);
  }

  RngStream rng(5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix xi(20, 3);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 3; ++j) xi(i, j) = rng.normal();
    Vector x_hat(3), cc(3);
    for (int j = 0; j < 3; ++j) {
      x_hat(j) = 5.0 * rng.normal();
      cc(j) = rng.normal();
    }
    const auto res = line_search_fast(cc, Vector::Zero(3), x_hat, xi, 1.0);
    CHECK(res.step >= 0.0);
    CHECK(res.step <= 1.0);
    CHECK(((1.0 - (xi * res.x).array()) >= -1e-10).all());
  }
}
