#pragma once

#include <vector>

#include <Eigen/Dense>

#include "evoch/forms.hpp"
#include "evoch/model1.hpp"

namespace evoch {

/// Operators for the density-weighted model at one time level. M0 is the
/// weighted mass matrix, captured at t=0; with the piecewise-constant
/// density rho = 1/J on affine elements it is time-invariant, so it doubles
/// as the weighted mass at every t.
struct WeightedOperators {
  SpMat M0;
  SpMat A_S;
  SpMat A_S_rho;
  SpMat M_cur;      // unweighted mass at the current time (mean constraint)
  SpMat M_pot_rho;  // weighted quadrature mass for the load's linear part
  std::vector<double> rho;
  double time = 0.0;
};

WeightedOperators make_weighted_operators(const FormMatrices& forms, const SurfaceMesh& mesh,
                                          const SpMat& M0);

/// Implicit Euler stepper for the weighted model in mixed form,
///   M0 (c^{n+1} - c^n)/dt + A_S_rho^{n+1} w^{n+1} = 0,
///   A_S^{n+1} c^{n+1} + LoadWeighted(c) - M0 w^{n+1} = 0,
/// with the density inside the potential and chemical-potential terms but not
/// the gradient term. Dotting the first equation with all-ones conserves the
/// weighted total mass algebraically.
class Model2Stepper {
 public:
  Model2Stepper(PotentialParams pot, Scheme scheme, QuadraturePolicy policy,
                NewtonOptions opts = {})
      : pot_(pot), scheme_(scheme), policy_(policy), opts_(opts) {}

  /// Nodal interpolation of c0; requires |c0| <= 1 and |mean(c0)| < 1.
  PhaseState initialize(const SurfaceMesh& mesh0, const FormMatrices& forms0,
                        const Eigen::VectorXd& c0) const;

  PhaseState step(const PhaseState& state, const SurfaceMesh& mesh_next,
                  const WeightedOperators& ops_next, double dt, StepReport* report = nullptr,
                  const PhaseState* guess = nullptr) const;

  const PotentialParams& potential() const { return pot_; }
  void set_delta(double d) { pot_.delta = d; }

 private:
  PotentialParams pot_;
  Scheme scheme_;
  QuadraturePolicy policy_;
  NewtonOptions opts_;
};

/// Solution zeta of the density-weighted Poisson problem
///   A_S_rho zeta = M0 f   subject to   1^T M_cur zeta = 0,
/// via a bordered system. Requires the weighted load of f to be compatible
/// (zero sum within 1e-10, scaled); throws PreconditionError otherwise.
Eigen::VectorXd weighted_inverse_laplacian(const WeightedOperators& ops,
                                           const Eigen::VectorXd& f);

/// || f ||_{rho,-1} = sqrt(zeta^T A_S_rho zeta) with zeta from the weighted
/// inverse Laplacian.
double rho_h_minus1_norm(const WeightedOperators& ops, const Eigen::VectorXd& f);

}  // namespace evoch
