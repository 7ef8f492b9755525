#pragma once

#include "solpath/mathkit/linalg.hpp"
#include "solpath/mathkit/rng.hpp"

namespace solpath {

enum class RepairPolicy {
  // Clip negative eigenvalues but throw RepairExceeded when the clipped mass
  // exceeds 1e-6 * trace(M).
  Strict,
  // Always clip and report.
  Clip,
};

// M ~= factor * factor^T with factor p x rank. rank < p only after an
// eigenvalue repair that dropped null directions.
struct PsdFactor {
  Matrix factor;
  int rank = 0;
  bool repaired = false;
  // Sum of |lambda| over clipped negative eigenvalues.
  double clipped_mass = 0.0;

  int dim() const { return static_cast<int>(factor.rows()); }
  // factor^T x, i.e. the vector whose norm is sqrt(x' M x).
  Vector apply_transpose(const Vector& x) const;
  Matrix reconstruct() const { return factor * factor.transpose(); }
};

// Plain Cholesky when M is numerically positive definite; otherwise a
// symmetric eigendecomposition with negative eigenvalues clipped to zero.
PsdFactor cholesky_psd(const Matrix& m, RepairPolicy policy = RepairPolicy::Strict);

// count x p matrix whose rows are mean + L z, z iid standard normal.
Matrix sample_mvn(const Vector& mean, const PsdFactor& factor, int count, RngStream& rng);

}  // namespace solpath
