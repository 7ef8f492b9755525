#pragma once

#include <string>
#include <vector>

#include "solpath/instances.hpp"
#include "solpath/mathkit/linalg.hpp"
#include "solpath/mathkit/psd.hpp"

namespace solpath {

enum class Method { RO, MomentDRO, SO, FAST };

const char* to_string(Method method);
Method parse_method(const std::string& name);  // ro, dro, so, fast

struct GridSpec {
  Method method = Method::RO;
  int p = 50;
  double ro_pad = 20.0;
  double dro_inflation = 1.5;
  // Degrees of freedom of the chi-square anchor for MomentDRO; 0 means d.
  int dro_df = 0;
  // Box |x_j| <= box injected into scenario LPs.
  double box = 1e3;
};

GridSpec default_grid(Method method);

enum class CandidateStatus { Optimal, Excluded };

struct Candidate {
  double s = 0.0;
  Vector x;
  CandidateStatus status = CandidateStatus::Excluded;
  std::string reason;
  double objective = 0.0;
  bool at_bound = false;
};

// Phase-one sample moments (divisor n1) and the grid anchor.
struct PhaseOneStats {
  int n1 = 0;
  Vector mean;
  Matrix cov;
  PsdFactor factor;
  double anchor = 0.0;
};

struct SolutionPath {
  Method method = Method::RO;
  std::vector<Candidate> candidates;  // ascending s
  PhaseOneStats stats;
  int dim() const;
};

// Moments of the phase-one rows plus their Cholesky factor.
// Throws SingularCovariance when the covariance is not positive definite.
PhaseOneStats phase_one_stats(const Matrix& phase1);

// ceil(t) that ignores floating noise such as 0.9 * 100 = 90.00000000000001.
int ceil_count(double t);

// Mahalanobis distances (xi - mean)' cov^{-1} (xi - mean) over the rows.
std::vector<double> mahalanobis_distances(const Matrix& rows, const PhaseOneStats& stats);

// Grid of conservativeness values. RO needs `stats` (anchor is filled in);
// SO uses n1; FAST is data free.
std::vector<double> build_grid(const GridSpec& spec, PhaseOneStats& stats, const Matrix& phase1,
                               double alpha, double beta);

Candidate solve_ro_point(const PhaseOneStats& stats, double s, const Vector& c, double b);
// Moment-DRO cone coefficient sqrt(s/n1) + sqrt((1-alpha)/alpha) sqrt(1 + s/sqrt(n1)).
double dro_kappa(double s, int n1, double alpha);
Candidate solve_dro_point(const PhaseOneStats& stats, double s, double alpha, const Vector& c, double b);
// min c'x s.t. xi_i'x <= b for the first s rows of `rows`, |x_j| <= box.
Candidate solve_so_point(const Matrix& rows, int s, const Vector& c, double b, double box);
SolutionPath fast_segment_points(const Vector& anchor, const Vector& x_hat, const Vector& c,
                                 const std::vector<double>& grid);

// The data-driven solution path for one method from phase-one data.
SolutionPath build_path(const GridSpec& spec, const Matrix& phase1, const Vector& c, double b,
                        double alpha, double beta);

// Safe convex approximation with the true moments, kappa = sqrt(2 ln(1/alpha)).
Candidate solve_sca_benchmark(const GaussianLinearCcp& inst);

// Path CSV: header s,status,objective,x_1..x_d.
void write_path(const SolutionPath& path, const std::string& file);
SolutionPath read_path(const std::string& file);

// Smallest q <= p_hat whose binary KL divergence KL(q || p_hat) is at most s.
double kl_worst_case_mean(double p_hat, double s);
double binary_kl(double q, double p);

}  // namespace solpath
