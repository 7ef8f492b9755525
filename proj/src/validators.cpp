#include "solpath/validators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solpath/mathkit/distributions.hpp"
#include "solpath/mathkit/moments.hpp"
#include "solpath/mathkit/psd.hpp"

namespace solpath {

ConstraintEvaluator ccp_indicator(double b) {
  return [b](const Vector& x, const Matrix& samples) -> Vector {
    const Vector lhs = samples * x;
    return (lhs.array() <= b).cast<double>().matrix();
  };
}

HMatrix evaluate_h_matrix(const SolutionPath& path, const Matrix& phase2, const ConstraintEvaluator& h) {
  if (phase2.rows() == 0) throw Error(ErrorCode::EmptyInput, "evaluate_h_matrix: empty phase-two sample");
  const auto p = static_cast<Eigen::Index>(path.candidates.size());
  HMatrix out;
  out.values = Matrix::Zero(p, phase2.rows());
  out.valid.assign(static_cast<std::size_t>(p), false);
  bool any = false;
  for (Eigen::Index j = 0; j < p; ++j) {
    const Candidate& cand = path.candidates[static_cast<std::size_t>(j)];
    if (cand.status != CandidateStatus::Optimal) continue;
    require_same_size(cand.x.size(), phase2.cols(), "evaluate_h_matrix: candidate vs sample dimension");
    out.values.row(j) = h(cand.x, phase2).transpose();
    out.valid[static_cast<std::size_t>(j)] = true;
    any = true;
  }
  if (!any) throw Error(ErrorCode::EmptyPath, "evaluate_h_matrix: no optimal candidate on the path");
  return out;
}

HMatrix evaluate_h_matrix(const SolutionPath& path, const Matrix& phase2, double b) {
  return evaluate_h_matrix(path, phase2, ccp_indicator(b));
}

const char* to_string(RuleKind rule) {
  switch (rule) {
    case RuleKind::UnnormalizedGS: return "unnorm_gs";
    case RuleKind::NormalizedGS: return "norm_gs";
    case RuleKind::Univariate: return "univariate";
    case RuleKind::Plain: return "plain";
  }
  return "unknown";
}

RuleKind parse_rule(const std::string& name) {
  for (RuleKind rule : all_rules()) {
    if (name == to_string(rule)) return rule;
  }
  throw Error(ErrorCode::ConfigError,
              "unknown validator '" + name + "' (expected unnorm_gs, norm_gs, univariate, plain)");
}

const std::vector<RuleKind>& all_rules() {
  static const std::vector<RuleKind> rules = {RuleKind::UnnormalizedGS, RuleKind::NormalizedGS,
                                              RuleKind::Univariate, RuleKind::Plain};
  return rules;
}

double gaussian_sup_quantile(const Matrix& cov, const Vector& sigmas, double beta, int draws,
                             RngStream& rng, bool normalized) {
  const auto p = cov.rows();
  if (cov.cols() != p) throw Error(ErrorCode::DimensionMismatch, "gaussian_sup_quantile: cov not square");
  require_same_size(sigmas.size(), p, "gaussian_sup_quantile: sigmas");
  if (!(beta > 0.0 && beta < 0.5)) throw Error(ErrorCode::OutOfRange, "gaussian_sup_quantile: beta");
  if (p == 0) throw Error(ErrorCode::EmptyInput, "gaussian_sup_quantile: no candidates");
  const double z = std_normal_quantile(1.0 - beta);

  std::vector<Eigen::Index> active;
  double clamp = 0.0;
  if (normalized) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (sigmas(j) > 0.0) active.push_back(j);
    }
    if (active.empty()) {
      throw Error(ErrorCode::AllDegenerate, "gaussian_sup_quantile: every sigma is zero");
    }
    clamp = z;
  } else {
    for (Eigen::Index j = 0; j < p; ++j) {
      active.push_back(j);
      clamp = std::max(clamp, z * sigmas(j));
    }
  }

  // Covariance of the statistic's coordinates.
  const auto m = static_cast<Eigen::Index>(active.size());
  Matrix work(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index c = 0; c < m; ++c) {
      double v = 0.5 * (cov(active[a], active[c]) + cov(active[c], active[a]));
      if (normalized) v /= sigmas(active[a]) * sigmas(active[c]);
      work(a, c) = v;
    }
  }

  // Coordinates with Var(Z_a - Z_c) = 0 are almost surely equal; keep one.
  std::vector<Eigen::Index> reps;
  for (Eigen::Index a = 0; a < m; ++a) {
    bool dup = false;
    for (Eigen::Index c : reps) {
      const double gap = work(a, a) + work(c, c) - 2.0 * work(a, c);
      if (gap <= 1e-12 * std::max({work(a, a), work(c, c), std::numeric_limits<double>::min()})) {
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(a);
  }
  if (reps.size() == 1) return clamp;

  const auto k = static_cast<Eigen::Index>(reps.size());
  Matrix reduced(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index c = 0; c < k; ++c) reduced(a, c) = work(reps[a], reps[c]);
  }
  const PsdFactor factor = cholesky_psd(reduced, RepairPolicy::Clip);

  if (draws < 1) throw Error(ErrorCode::OutOfRange, "gaussian_sup_quantile: draws must be >= 1");
  std::vector<double> maxima(static_cast<std::size_t>(draws));
  const Eigen::Index rank = factor.factor.cols();
  constexpr int kBlock = 2048;
  Eigen::MatrixXd normals(rank, kBlock);
  const Eigen::MatrixXd lower = factor.factor;
  for (int start = 0; start < draws; start += kBlock) {
    const int count = std::min(kBlock, draws - start);
    for (int t = 0; t < count; ++t) {
      for (Eigen::Index r = 0; r < rank; ++r) normals(r, t) = rng.normal();
    }
    Eigen::MatrixXd values = lower * normals.leftCols(count);
    for (int t = 0; t < count; ++t) maxima[static_cast<std::size_t>(start + t)] = values.col(t).maxCoeff();
  }
  const int order = std::clamp(ceil_count((1.0 - beta) * draws), 1, draws);
  const double q = empirical_quantile(maxima, order);
  return std::max(q, clamp);
}

double ValidationReport::s_star() const {
  return selected ? candidates[static_cast<std::size_t>(*selected)].s : std::nan("");
}

ValidationReport select_candidate(const SolutionPath& path, const HMatrix& hmatrix, double gamma,
                                  const MarginRule& rule, RngStream& rng) {
  const int p = hmatrix.candidates();
  if (static_cast<int>(path.candidates.size()) != p) {
    throw Error(ErrorCode::DimensionMismatch, "select_candidate: path vs h-matrix rows");
  }
  std::vector<int> rows;
  for (int j = 0; j < p; ++j) {
    if (hmatrix.valid[static_cast<std::size_t>(j)]) rows.push_back(j);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyPath, "select_candidate: no valid candidate");

  const int n2 = hmatrix.samples();
  ValidationReport report;
  report.rule = rule.kind;
  report.beta = rule.beta;
  report.gamma = gamma;
  report.n2 = n2;
  report.excluded = p - static_cast<int>(rows.size());

  Matrix samples(n2, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) samples.col(static_cast<Eigen::Index>(k)) = hmatrix.values.row(rows[k]).transpose();
  const Moments mom = mean_and_cov(samples);
  Vector sigma(static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index k = 0; k < sigma.size(); ++k) sigma(k) = std::sqrt(std::max(0.0, mom.cov(k, k)));

  const double z = std_normal_quantile(1.0 - rule.beta);
  const double root_n = std::sqrt(static_cast<double>(n2));
  switch (rule.kind) {
    case RuleKind::UnnormalizedGS:
      report.q = gaussian_sup_quantile(mom.cov, sigma, rule.beta, rule.mc_budget, rng, false);
      break;
    case RuleKind::NormalizedGS:
      // With every sigma zero all margins vanish whatever q is.
      report.q = sigma.maxCoeff() > 0.0
                     ? gaussian_sup_quantile(mom.cov, sigma, rule.beta, rule.mc_budget, rng, true)
                     : z;
      break;
    case RuleKind::Univariate: report.q = z; break;
    case RuleKind::Plain: report.q = 0.0; break;
  }

  report.candidates.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    auto& entry = report.candidates[static_cast<std::size_t>(j)];
    entry.s = path.candidates[static_cast<std::size_t>(j)].s;
    entry.objective = path.candidates[static_cast<std::size_t>(j)].objective;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto& entry = report.candidates[static_cast<std::size_t>(rows[k])];
    const double sd = sigma(static_cast<Eigen::Index>(k));
    entry.valid = true;
    entry.h_mean = mom.mean(static_cast<Eigen::Index>(k));
    entry.sigma = sd;
    switch (rule.kind) {
      case RuleKind::UnnormalizedGS: entry.margin = report.q / root_n; break;
      case RuleKind::NormalizedGS: entry.margin = (report.q * sd) / root_n; break;
      case RuleKind::Univariate: entry.margin = (z * sd) / root_n; break;
      case RuleKind::Plain: entry.margin = 0.0; break;
    }
    entry.pass = entry.h_mean >= gamma + entry.margin;
  }

  for (int j : rows) {
    const auto& entry = report.candidates[static_cast<std::size_t>(j)];
    if (!entry.pass) continue;
    if (!report.selected) {
      report.selected = j;
      continue;
    }
    const auto& best = report.candidates[static_cast<std::size_t>(*report.selected)];
    if (entry.objective < best.objective || (entry.objective == best.objective && entry.s < best.s)) {
      report.selected = j;
    }
  }
  return report;
}

nlohmann::json to_json(const ValidationReport& report) {
  nlohmann::json doc;
  doc["rule"] = to_string(report.rule);
  doc["beta"] = report.beta;
  doc["gamma"] = report.gamma;
  doc["n2"] = report.n2;
  doc["q"] = report.q;
  doc["excluded"] = report.excluded;
  if (report.selected) {
    const auto& sel = report.candidates[static_cast<std::size_t>(*report.selected)];
    doc["selected"] = {{"index", *report.selected}, {"s", sel.s}, {"objective", sel.objective}};
  } else {
    doc["selected"] = nullptr;
  }
  auto& cands = doc["candidates"] = nlohmann::json::array();
  for (const auto& entry : report.candidates) {
    nlohmann::json item;
    item["s"] = entry.s;
    if (entry.valid) {
      item["h_mean"] = entry.h_mean;
      item["sigma"] = entry.sigma;
      item["margin"] = entry.margin;
    } else {
      item["h_mean"] = nullptr;
      item["sigma"] = nullptr;
      item["margin"] = nullptr;
    }
    item["pass"] = entry.pass;
    item["status"] = entry.valid ? "Optimal" : "Excluded";
    cands.push_back(std::move(item));
  }
  return doc;
}

}  // namespace solpath
