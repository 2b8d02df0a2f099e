#include "evoch/potential.hpp"

#include <cmath>
#include <string>

#include "evoch/errors.hpp"

namespace evoch {

namespace detail {

// (1+r)ln(1+r) + (1-r)ln(1-r); log1p keeps the r -> +-1 limits accurate.
double log_branch_middle(double r) {
  const double a = (1.0 + r) == 0.0 ? 0.0 : (1.0 + r) * std::log1p(r);
  const double b = (1.0 - r) == 0.0 ? 0.0 : (1.0 - r) * std::log1p(-r);
  return a + b;
}

double log_branch_upper(double r, double d) {
  const double om = 1.0 - r, op = 1.0 + r;
  return om * std::log(d) + op * std::log(2.0 - d) + om * om / (2.0 * d) +
         op * op / (2.0 * (2.0 - d)) - 1.0;
}

double log_branch_lower(double r, double d) { return log_branch_upper(-r, d); }

double dlog_branch_middle(double r) { return std::log1p(r) - std::log1p(-r); }

double dlog_branch_upper(double r, double d) {
  return std::log((2.0 - d) / d) - (1.0 - r) / d + (1.0 + r) / (2.0 - d);
}

double dlog_branch_lower(double r, double d) { return -dlog_branch_upper(-r, d); }

}  // namespace detail

namespace {

void check_sharp_domain(double r, bool strict) {
  if (strict ? (std::abs(r) >= 1.0) : (std::abs(r) > 1.0))
    throw DomainError("sharp potential evaluated at r=" + std::to_string(r) +
                      (strict ? " (need |r| < 1)" : " (need |r| <= 1)"));
}

double log_part(double r, const PotentialParams& p) {
  if (p.sharp()) {
    check_sharp_domain(r, false);
    return detail::log_branch_middle(r);
  }
  const double knot = 1.0 - p.delta;
  if (r > knot) return detail::log_branch_upper(r, p.delta);
  if (r < -knot) return detail::log_branch_lower(r, p.delta);
  return detail::log_branch_middle(r);
}

}  // namespace

double F_value(double r, const PotentialParams& p) {
  return 0.5 * p.theta * log_part(r, p) + 0.5 * (1.0 - r * r);
}

double phi(double r, const PotentialParams& p) {
  if (p.sharp()) {
    check_sharp_domain(r, true);
    return detail::dlog_branch_middle(r);
  }
  const double knot = 1.0 - p.delta;
  if (r > knot) return detail::dlog_branch_upper(r, p.delta);
  if (r < -knot) return detail::dlog_branch_lower(r, p.delta);
  return detail::dlog_branch_middle(r);
}

double phi_prime(double r, const PotentialParams& p) {
  if (p.sharp()) {
    check_sharp_domain(r, true);
    return 1.0 / (1.0 + r) + 1.0 / (1.0 - r);
  }
  if (std::abs(r) > 1.0 - p.delta) return 1.0 / p.delta + 1.0 / (2.0 - p.delta);
  return 1.0 / (1.0 + r) + 1.0 / (1.0 - r);
}

Interval newton_safeguard_region(const PotentialParams& p) {
  if (p.sharp()) return {-1.0 + 1e-12, 1.0 - 1e-12};
  return {-1.0 + p.delta, 1.0 - p.delta};
}

}  // namespace evoch
