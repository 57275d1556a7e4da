#pragma once

// Threshold formulas from location counts: the all-pairs estimate, the benign-pair fixed point
// and the two-level relation that treats the physical model as the lowest concatenation level.

#include "gcq/locations.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcq {

/// 1 / C(A,2): every pair of faulty locations assumed fatal.
inline double threshold_simple(double A) {
  if (A < 2) throw std::invalid_argument("threshold_simple needs A >= 2");
  return 1.0 / choose2(A);
}

/// Positive fixed point of e = e^2 (B + C(A,3) e). Evaluated as 2 / (sqrt(B^2 + 4 C3) + B),
/// the same root without the cancellation of the difference form when B^2 >> C3.
inline double threshold_benign(double A, double B) {
  if (A < 3) throw std::invalid_argument("threshold_benign needs A >= 3");
  if (!(B > 0)) throw std::invalid_argument("threshold_benign needs B > 0");
  const double c3 = choose3(A);
  return 2.0 / (std::sqrt(B * B + 4 * c3) + B);
}

/// Relative residual of the fixed-point equation at `e`.
inline double benign_residual(double A, double B, double e) {
  return std::abs(e - e * e * (B + choose3(A) * e)) / e;
}

/// Solves `level1 = B x^2 + C(A,3) x^3` for the unique positive x below 1 by bisection.
inline double solve_level_relation(double A, double B, double level1) {
  const double c3 = choose3(A);
  auto f = [&](double x) { return B * x * x + c3 * x * x * x - level1; };
  if (!(level1 > 0)) throw std::invalid_argument("level-one threshold must be positive");
  if (f(1.0) < 0) throw std::domain_error("no positive root below 1 for the level relation");
  double lo = 0, hi = 1;
  for (int it = 0; it < 2000 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Physical threshold when only the lowest level carries the physical-model overheads: the
/// level-one threshold comes from the upper-level counts and is then pushed through the
/// physical counts.
inline double threshold_two_level(double A_phys, double B_phys, double A_l1, double B_l1) {
  return solve_level_relation(A_phys, B_phys, threshold_benign(A_l1, B_l1));
}

struct ThresholdReport {
  double A = 0, B = 0;
  double eps0_simple = 0;
  double eps0_benign = 0;
  double eps_phys = std::numeric_limits<double>::quiet_NaN();  ///< set for the two-level solve
  double eps_c = std::numeric_limits<double>::quiet_NaN();     ///< classical control threshold
};

inline ThresholdReport threshold_report(double A, double B) {
  ThresholdReport r;
  r.A = A;
  r.B = B;
  r.eps0_simple = threshold_simple(A);
  r.eps0_benign = threshold_benign(A, B);
  return r;
}

}  // namespace gcq
