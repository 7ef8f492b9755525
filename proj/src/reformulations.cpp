#include "solpath/reformulations.hpp"

#include <cmath>
#include <fstream>

#include "solpath/csv.hpp"
#include "solpath/mathkit/distributions.hpp"
#include "solpath/mathkit/moments.hpp"
#include "solpath/solvers/line_search.hpp"
#include "solpath/solvers/lp.hpp"
#include "solpath/solvers/soc.hpp"

namespace solpath {

const char* to_string(Method method) {
  switch (method) {
    case Method::RO: return "ro";
    case Method::MomentDRO: return "dro";
    case Method::SO: return "so";
    case Method::FAST: return "fast";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "ro") return Method::RO;
  if (name == "dro") return Method::MomentDRO;
  if (name == "so") return Method::SO;
  if (name == "fast") return Method::FAST;
  throw Error(ErrorCode::ConfigError, "unknown method '" + name + "' (expected ro, dro, so, fast)");
}

GridSpec default_grid(Method method) {
  GridSpec spec;
  spec.method = method;
  spec.p = method == Method::FAST ? 11 : 50;
  return spec;
}

int SolutionPath::dim() const {
  for (const auto& cand : candidates) {
    if (cand.x.size()) return static_cast<int>(cand.x.size());
  }
  return 0;
}

int ceil_count(double t) { return static_cast<int>(std::ceil(t - 1e-9 * std::max(1.0, std::abs(t)))); }

PhaseOneStats phase_one_stats(const Matrix& phase1) {
  PhaseOneStats stats;
  stats.n1 = static_cast<int>(phase1.rows());
  const Moments m = mean_and_cov(phase1);
  stats.mean = m.mean;
  stats.cov = m.cov;
  stats.factor = cholesky_psd(m.cov, RepairPolicy::Clip);
  if (stats.factor.repaired) {
    throw Error(ErrorCode::SingularCovariance, "phase-one sample covariance is not positive definite");
  }
  return stats;
}

std::vector<double> mahalanobis_distances(const Matrix& rows, const PhaseOneStats& stats) {
  require_same_size(rows.cols(), stats.mean.size(), "mahalanobis_distances");
  std::vector<double> out(static_cast<std::size_t>(rows.rows()));
  const auto lower = stats.factor.factor.triangularView<Eigen::Lower>();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Vector centered = rows.row(i).transpose() - stats.mean;
    out[static_cast<std::size_t>(i)] = lower.solve(centered).squaredNorm();
  }
  return out;
}

std::vector<double> build_grid(const GridSpec& spec, PhaseOneStats& stats, const Matrix& phase1,
                               double alpha, double beta) {
  if (spec.p < 1) throw Error(ErrorCode::OutOfRange, "build_grid: p must be >= 1");
  std::vector<double> grid;
  const int p = spec.p;
  switch (spec.method) {
    case Method::RO: {
      if (phase1.rows() == 0) throw Error(ErrorCode::EmptyInput, "build_grid: empty phase-one data");
      const auto dist = mahalanobis_distances(phase1, stats);
      const int k = std::clamp(ceil_count((1.0 - alpha) * static_cast<double>(dist.size())), 1,
                               static_cast<int>(dist.size()));
      stats.anchor = empirical_quantile(dist, k);
      for (int j = 1; j <= p; ++j) grid.push_back((stats.anchor + spec.ro_pad) * j / p);
      break;
    }
    case Method::MomentDRO: {
      const int df = spec.dro_df > 0 ? spec.dro_df : static_cast<int>(phase1.cols());
      stats.anchor = chi_square_quantile(df, 1.0 - beta);
      for (int j = 1; j <= p; ++j) grid.push_back(spec.dro_inflation * stats.anchor * j / p);
      break;
    }
    case Method::SO: {
      if (phase1.rows() == 0) throw Error(ErrorCode::EmptyInput, "build_grid: empty phase-one data");
      for (Eigen::Index j = 1; j <= phase1.rows(); ++j) grid.push_back(static_cast<double>(j));
      break;
    }
    case Method::FAST: {
      if (p < 2) throw Error(ErrorCode::OutOfRange, "build_grid: FAST grid needs p >= 2");
      for (int j = 0; j < p; ++j) grid.push_back(static_cast<double>(j) / (p - 1));
      break;
    }
  }
  return grid;
}

namespace {

Candidate from_soc(double s, const SocProblem& prob) {
  Candidate cand;
  cand.s = s;
  try {
    const SocSolution sol = solve_single_soc(prob);
    if (sol.status == SolveStatus::Optimal) {
      cand.status = CandidateStatus::Optimal;
      cand.x = sol.x;
      cand.objective = sol.objective;
    } else {
      cand.reason = to_string(sol.status);
    }
  } catch (const Error& e) {
    cand.reason = e.what();
  }
  return cand;
}

}  // namespace

Candidate solve_ro_point(const PhaseOneStats& stats, double s, const Vector& c, double b) {
  if (!(s > 0.0)) throw Error(ErrorCode::OutOfRange, "solve_ro_point: s must be positive");
  return from_soc(s, SocProblem{c, stats.mean, std::sqrt(s), stats.factor, b});
}

double dro_kappa(double s, int n1, double alpha) {
  const double n = static_cast<double>(n1);
  return std::sqrt(s / n) + std::sqrt((1.0 - alpha) / alpha) * std::sqrt(1.0 + s / std::sqrt(n));
}

Candidate solve_dro_point(const PhaseOneStats& stats, double s, double alpha, const Vector& c, double b) {
  if (!(s >= 0.0)) throw Error(ErrorCode::OutOfRange, "solve_dro_point: s must be >= 0");
  return from_soc(s, SocProblem{c, stats.mean, dro_kappa(s, stats.n1, alpha), stats.factor, b});
}

Candidate solve_so_point(const Matrix& rows, int s, const Vector& c, double b, double box) {
  if (s < 1 || s > rows.rows()) {
    throw Error(ErrorCode::OutOfRange, "solve_so_point: s=" + std::to_string(s) + " outside [1, " +
                                           std::to_string(rows.rows()) + "]");
  }
  const auto d = c.size();
  LpProblem lp;
  lp.c = c;
  lp.a = rows.topRows(s);
  lp.b = Vector::Constant(s, b);
  lp.lo = Vector::Constant(d, -box);
  lp.hi = Vector::Constant(d, box);
  Candidate cand;
  cand.s = s;
  try {
    const LpSolution sol = solve_lp(lp);
    if (sol.status == SolveStatus::Optimal) {
      cand.status = CandidateStatus::Optimal;
      cand.x = sol.x;
      cand.objective = sol.objective;
      for (bool flag : sol.at_bound) cand.at_bound = cand.at_bound || flag;
    } else {
      cand.reason = to_string(sol.status);
    }
  } catch (const Error& e) {
    cand.reason = e.what();
  }
  return cand;
}

SolutionPath fast_segment_points(const Vector& anchor, const Vector& x_hat, const Vector& c,
                                 const std::vector<double>& grid) {
  require_same_size(anchor.size(), x_hat.size(), "fast_segment_points");
  require_same_size(c.size(), x_hat.size(), "fast_segment_points: c");
  SolutionPath path;
  path.method = Method::FAST;
  for (double s : grid) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::OutOfRange, "fast_segment_points: s outside [0,1]");
    Candidate cand;
    cand.s = s;
    if (s == 0.0) {
      cand.x = anchor;
    } else if (s == 1.0) {
      cand.x = x_hat;
    } else {
      cand.x = (1.0 - s) * anchor + s * x_hat;
    }
    cand.status = CandidateStatus::Optimal;
    cand.objective = c.dot(cand.x);
    path.candidates.push_back(std::move(cand));
  }
  return path;
}

SolutionPath build_path(const GridSpec& spec, const Matrix& phase1, const Vector& c, double b,
                        double alpha, double beta) {
  require_same_size(phase1.cols(), c.size(), "build_path: phase-one data vs c");
  SolutionPath path;
  path.method = spec.method;
  path.stats.n1 = static_cast<int>(phase1.rows());
  if (spec.method == Method::RO || spec.method == Method::MomentDRO) path.stats = phase_one_stats(phase1);
  const auto grid = build_grid(spec, path.stats, phase1, alpha, beta);

  switch (spec.method) {
    case Method::RO:
      for (double s : grid) path.candidates.push_back(solve_ro_point(path.stats, s, c, b));
      break;
    case Method::MomentDRO:
      for (double s : grid) path.candidates.push_back(solve_dro_point(path.stats, s, alpha, c, b));
      break;
    case Method::SO:
      for (double s : grid) {
        path.candidates.push_back(solve_so_point(phase1, static_cast<int>(s), c, b, spec.box));
      }
      break;
    case Method::FAST: {
      const Candidate hat = solve_so_point(phase1, static_cast<int>(phase1.rows()), c, b, spec.box);
      if (hat.status != CandidateStatus::Optimal) {
        throw Error(ErrorCode::NumericalBreakdown, "FAST first stage failed: " + hat.reason);
      }
      auto segment = fast_segment_points(Vector::Zero(c.size()), hat.x, c, grid);
      segment.stats = path.stats;
      return segment;
    }
  }
  return path;
}

Candidate solve_sca_benchmark(const GaussianLinearCcp& inst) {
  const double kappa = std::sqrt(2.0 * std::log(1.0 / inst.alpha));
  return from_soc(kappa * kappa, SocProblem{inst.c, inst.mu, kappa, inst.sigma_factor, inst.b});
}

void write_path(const SolutionPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + file);
  const int d = path.dim();
  out << "s,status,objective";
  for (int j = 1; j <= d; ++j) out << ",x_" << j;
  out << '\n';
  for (const auto& cand : path.candidates) {
    const bool ok = cand.status == CandidateStatus::Optimal;
    out << csv::format_double(cand.s) << ',' << (ok ? "Optimal" : "Excluded") << ','
        << csv::format_double(ok ? cand.objective : std::nan(""));
    for (int j = 0; j < d; ++j) out << ',' << csv::format_double(ok ? cand.x(j) : std::nan(""));
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + file);
}

SolutionPath read_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + file);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, file + ": missing header");
  const auto header = csv::split(csv::strip_cr(line));
  if (header.size() < 4 || header[0] != "s" || header[1] != "status" || header[2] != "objective") {
    throw Error(ErrorCode::ParseError, file + ": expected header s,status,objective,x_1,...");
  }
  const int d = static_cast<int>(header.size()) - 3;
  SolutionPath path;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = csv::strip_cr(line);
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::RaggedRows, file + ": line " + std::to_string(line_no));
    }
    Candidate cand;
    cand.s = csv::parse_double(cells[0], line_no, 1);
    if (cells[1] == "Optimal") {
      cand.status = CandidateStatus::Optimal;
    } else if (cells[1] == "Excluded") {
      cand.status = CandidateStatus::Excluded;
      cand.reason = "excluded in input";
    } else {
      throw Error(ErrorCode::ParseError, file + ": line " + std::to_string(line_no) + ": bad status");
    }
    const bool ok = cand.status == CandidateStatus::Optimal;
    cand.x.resize(d);
    for (int j = 0; j < d; ++j) cand.x(j) = csv::parse_double(cells[3 + j], line_no, 4 + j, !ok);
    cand.objective = csv::parse_double(cells[2], line_no, 3, !ok);
    if (!path.candidates.empty() && !(cand.s > path.candidates.back().s)) {
      throw Error(ErrorCode::ParseError, file + ": s values must be strictly increasing");
    }
    path.candidates.push_back(std::move(cand));
  }
  if (path.candidates.empty()) throw Error(ErrorCode::EmptyPath, file + ": no candidates");
  return path;
}

}  // namespace solpath
