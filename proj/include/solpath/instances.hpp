#pragma once

#include <cstdint>
#include <string>

#include "solpath/mathkit/linalg.hpp"
#include "solpath/mathkit/psd.hpp"
#include "solpath/mathkit/rng.hpp"

namespace solpath {

// Ground truth for  min c'x  s.t.  P(xi'x <= b) >= 1 - alpha,  xi ~ N(mu, sigma).
struct GaussianLinearCcp {
  int d = 0;
  Vector mu;
  Matrix sigma;
  PsdFactor sigma_factor;
  Vector c;
  double b = 0.0;
  double alpha = 0.1;

  double gamma() const { return 1.0 - alpha; }
};

// Checks dimensions, symmetry/PSD of sigma, c != 0, b > 0, alpha in (0, 0.5)
// and fills sigma_factor. Throws ConfigError on violation.
GaussianLinearCcp make_instance(Vector mu, Matrix sigma, Vector c, double b, double alpha);

struct SampleSet {
  Matrix data;  // n x d
  std::string provenance;

  int size() const { return static_cast<int>(data.rows()); }
  int dim() const { return static_cast<int>(data.cols()); }
};

// Phase two takes rows [0, n2), phase one the remaining rows [n2, n).
struct DataSplit {
  Matrix phase1;
  Matrix phase2;
};

GaussianLinearCcp generate_canonical_instance(int d, std::uint64_t seed, double alpha = 0.1);

SampleSet draw_samples(const GaussianLinearCcp& inst, int n, RngStream& rng);

DataSplit split_data(const SampleSet& samples, int n1, int n2);

// Exact P(xi'x <= b) under the instance's Gaussian law.
double true_satisfaction_probability(const GaussianLinearCcp& inst, const Vector& x);

SampleSet read_samples(const std::string& path);
void write_samples(const SampleSet& samples, const std::string& path);

// Instance file: JSON object with keys d, mu, sigma (row-major), c, b, alpha.
GaussianLinearCcp read_instance(const std::string& path);
void write_instance(const GaussianLinearCcp& inst, const std::string& path);

}  // namespace solpath
