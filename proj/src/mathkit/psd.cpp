#include "solpath/mathkit/psd.hpp"

#include <cmath>
#include <limits>

namespace solpath {
namespace {

void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "cholesky_psd: matrix is not square");
  }
  if (!m.allFinite()) throw Error(ErrorCode::NotSymmetric, "cholesky_psd: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-10 * scale) {
        throw Error(ErrorCode::NotSymmetric, "cholesky_psd: entry (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") differs from its transpose");
      }
    }
  }
}

// Returns false when a pivot is not safely positive.
bool try_cholesky(const Matrix& m, Matrix& lower) {
  const Eigen::Index p = m.rows();
  lower = Matrix::Zero(p, p);
  double max_diag = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) max_diag = std::max(max_diag, m(i, i));
  const double floor = 1e-14 * std::max(max_diag, std::numeric_limits<double>::min());
  for (Eigen::Index j = 0; j < p; ++j) {
    double d = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > floor)) return false;
    const double ljj = std::sqrt(d);
    lower(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double s = 0.5 * (m(i, j) + m(j, i));
      for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / ljj;
    }
  }
  return true;
}

}  // namespace

Vector PsdFactor::apply_transpose(const Vector& x) const {
  require_same_size(x.size(), factor.rows(), "PsdFactor::apply_transpose");
  return factor.transpose() * x;
}

PsdFactor cholesky_psd(const Matrix& m, RepairPolicy policy) {
  check_symmetric(m);
  const Eigen::Index p = m.rows();
  PsdFactor out;
  if (p == 0) return out;

  Matrix lower;
  if (try_cholesky(m, lower)) {
    out.factor = std::move(lower);
    out.rank = static_cast<int>(p);
    return out;
  }

  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double top = std::max(0.0, lambda.maxCoeff());
  const double keep = top * static_cast<double>(p) * std::numeric_limits<double>::epsilon();

  double clipped = 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (lambda(i) < 0.0) clipped += -lambda(i);
    if (lambda(i) > keep) ++rank;
  }
  if (policy == RepairPolicy::Strict && clipped > 1e-6 * sym.trace()) {
    throw Error(ErrorCode::RepairExceeded,
                "cholesky_psd: clipped eigenvalue mass " + std::to_string(clipped) +
                    " exceeds 1e-6 * trace");
  }

  out.factor = Matrix::Zero(p, rank);
  int col = 0;
  // Largest eigenvalues first so the leading columns carry most of the mass.
  for (Eigen::Index i = p - 1; i >= 0; --i) {
    if (lambda(i) > keep) {
      out.factor.col(col++) = eig.eigenvectors().col(i) * std::sqrt(lambda(i));
    }
  }
  out.rank = rank;
  out.repaired = true;
  out.clipped_mass = clipped;
  return out;
}

Matrix sample_mvn(const Vector& mean, const PsdFactor& factor, int count, RngStream& rng) {
  require_same_size(mean.size(), factor.factor.rows(), "sample_mvn: mean vs factor");
  if (count < 0) throw Error(ErrorCode::OutOfRange, "sample_mvn: negative count");
  const Eigen::Index p = mean.size();
  const Eigen::Index r = factor.factor.cols();
  Matrix out(count, p);
  Vector z(r);
  for (int i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < r; ++k) z(k) = rng.normal();
    out.row(i) = (mean + factor.factor * z).transpose();
  }
  return out;
}

}  // namespace solpath
