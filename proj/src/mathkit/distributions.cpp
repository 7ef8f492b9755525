#include "solpath/mathkit/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "solpath/error.hpp"

namespace solpath {
namespace {

// Bisection for the smallest-ish root of an increasing function on [lo, hi].
// Runs until the bracket stops shrinking in floating point.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_probability(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorCode::OutOfRange, std::string(what) + ": probability must lie in (0,1), got " +
                                           std::to_string(u));
  }
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double std_normal_quantile(double u) {
  require_probability(u, "std_normal_quantile");
  if (u == 0.5) return 0.0;
  // Phi(-39) underflows to ~0 and Phi(9) rounds to 1, so this bracket covers every double in (0,1).
  return bisect_increasing([](double z) { return std_normal_cdf(z); }, u, -40.0, 40.0);
}

double regularized_lower_gamma(double a, double x) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(a, x);
}

double chi_square_quantile(int df, double u) {
  if (df < 1) throw Error(ErrorCode::OutOfRange, "chi_square_quantile: df must be >= 1");
  require_probability(u, "chi_square_quantile");
  const double a = 0.5 * df;
  auto cdf = [a](double q) { return regularized_lower_gamma(a, 0.5 * q); };
  double hi = static_cast<double>(df) + 10.0;
  while (cdf(hi) < u) hi *= 2.0;
  return bisect_increasing(cdf, u, 0.0, hi);
}

}  // namespace solpath
