#pragma once

namespace evoch {

/// Logarithmic free energy
///   F(r) = (theta/2) F_ln(r) + (1 - r^2)/2,
///   F_ln(r) = (1+r) ln(1+r) + (1-r) ln(1-r),
/// for 0 < theta < 1, defined on [-1,1] (endpoints by continuity).
/// delta > 0 selects the C^2 regularization that replaces F_ln by quadratic
/// extensions outside |r| <= 1 - delta; delta = 0 is the sharp potential.
struct PotentialParams {
  double theta = 0.3;
  double delta = 1e-4;

  bool sharp() const { return delta == 0.0; }
};

struct Interval {
  double lo, hi;
};

double F_value(double r, const PotentialParams& p);

/// phi = F_ln' (sharp) or its branchwise regularization, so that
/// F'(r) = (theta/2) phi(r) - r. Globally Lipschitz with constant
/// 1/delta + 1/(2-delta) when delta > 0; nondecreasing in both cases.
double phi(double r, const PotentialParams& p);
double phi_prime(double r, const PotentialParams& p);

/// Interval on which Newton iterates are damped to stay; never used to clip
/// converged solutions.
Interval newton_safeguard_region(const PotentialParams& p);

namespace detail {
// Individual branches of the regularized log part (without the theta/2
// factor), exposed so tests can compare them across the knots r = +-(1-delta).
double log_branch_middle(double r);
double log_branch_upper(double r, double delta);
double log_branch_lower(double r, double delta);
double dlog_branch_middle(double r);
double dlog_branch_upper(double r, double delta);
double dlog_branch_lower(double r, double delta);
}  // namespace detail

}  // namespace evoch
