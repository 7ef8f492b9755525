#include <cmath>
#include <limits>

#include "solpath/error.hpp"
#include "solpath/reformulations.hpp"

namespace solpath {
namespace {

double xlogy_ratio(double a, double b) {
  if (a == 0.0) return 0.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a * std::log(a / b);
}

}  // namespace

double binary_kl(double q, double p) { return xlogy_ratio(q, p) + xlogy_ratio(1.0 - q, 1.0 - p); }

double kl_worst_case_mean(double p_hat, double s) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw Error(ErrorCode::OutOfRange, "kl_worst_case_mean: p_hat");
  if (!(s >= 0.0)) throw Error(ErrorCode::OutOfRange, "kl_worst_case_mean: s");
  if (s == 0.0 || p_hat == 0.0 || p_hat == 1.0) return p_hat;
  if (binary_kl(0.0, p_hat) <= s) return 0.0;
  // KL(q || p_hat) decreases on [0, p_hat]; keep lo infeasible, hi feasible.
  double lo = 0.0;
  double hi = p_hat;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (binary_kl(mid, p_hat) <= s) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace solpath
