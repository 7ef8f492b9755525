#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "solpath/mathkit/linalg.hpp"
#include "solpath/mathkit/rng.hpp"
#include "solpath/reformulations.hpp"

namespace solpath {

// h(x, xi_i) for every row xi_i of the sample matrix.
using ConstraintEvaluator = std::function<Vector(const Vector& x, const Matrix& samples)>;

// Indicator 1(xi'x <= b); ties count as satisfied.
ConstraintEvaluator ccp_indicator(double b);

// Row j holds h(x*(s_j), xi_i) over the phase-two sample; rows of excluded
// candidates are zero and masked out.
struct HMatrix {
  Matrix values;  // p x n2
  std::vector<bool> valid;

  int candidates() const { return static_cast<int>(values.rows()); }
  int samples() const { return static_cast<int>(values.cols()); }
};

HMatrix evaluate_h_matrix(const SolutionPath& path, const Matrix& phase2, const ConstraintEvaluator& h);
HMatrix evaluate_h_matrix(const SolutionPath& path, const Matrix& phase2, double b);

enum class RuleKind { UnnormalizedGS, NormalizedGS, Univariate, Plain };

const char* to_string(RuleKind rule);
RuleKind parse_rule(const std::string& name);  // unnorm_gs, norm_gs, univariate, plain
const std::vector<RuleKind>& all_rules();

struct MarginRule {
  RuleKind kind = RuleKind::Univariate;
  double beta = 0.05;
  // Monte Carlo draws for the Gaussian-supremum quantile.
  int mc_budget = 200000;
};

// (1-beta)-quantile of max_j Z_j (or max over sigma_j > 0 of Z_j / sigma_j
// when normalized), Z ~ N(0, cov), estimated from `draws` samples as the
// ceil((1-beta) draws)-th order statistic and clamped from below by
// max_j z sigma_j (resp. z). Exact, without sampling, when the maximum
// reduces to a single Gaussian.
double gaussian_sup_quantile(const Matrix& cov, const Vector& sigmas, double beta, int draws,
                             RngStream& rng, bool normalized);

struct CandidateReport {
  double s = 0.0;
  bool valid = false;
  double h_mean = 0.0;
  double sigma = 0.0;
  double margin = 0.0;
  bool pass = false;
  double objective = 0.0;
};

struct ValidationReport {
  RuleKind rule = RuleKind::Univariate;
  double beta = 0.0;
  double gamma = 0.0;
  int n2 = 0;
  // Critical value: the supremum quantile for GS rules, z_{1-beta} for
  // Univariate, 0 for Plain.
  double q = 0.0;
  std::optional<int> selected;
  std::vector<CandidateReport> candidates;
  int excluded = 0;

  bool none_feasible() const { return !selected.has_value(); }
  double s_star() const;
};

// Among valid candidates with h_mean >= gamma + margin, the one with the
// smallest objective; ties go to the smaller s, then the smaller index.
ValidationReport select_candidate(const SolutionPath& path, const HMatrix& hmatrix, double gamma,
                                  const MarginRule& rule, RngStream& rng);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace solpath
