#pragma once

#include <vector>

#include <Eigen/Dense>

#include "evoch/forms.hpp"
#include "evoch/potential.hpp"
#include "evoch/quadrature.hpp"
#include "evoch/surface.hpp"

namespace evoch {

enum class Scheme { ConvexSplit, FullyImplicit };
enum class ModelTag { Advected, Weighted };

/// Nodal coefficients of the order parameter (alpha) and the chemical
/// potential (beta) at one time level.
struct PhaseState {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  double time = 0.0;
  ModelTag model = ModelTag::Advected;
  double delta_used = 0.0;
};

struct NewtonOptions {
  double tol_scale = 1e-10;  // residual tolerance, scaled by the surface area
  int max_iterations = 25;
  int max_halvings = 8;
};

struct StepReport {
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Implicit Euler stepper for the advected model in mixed form,
///   (M^{n+1} a^{n+1} - M^n a^n)/dt + A_N^{n+1} a^{n+1} + A_S^{n+1} b^{n+1} = 0,
///   A_S^{n+1} a^{n+1} + Load(a) - M^{n+1} b^{n+1} = 0,
/// solved monolithically by damped Newton with a direct sparse factorization.
/// The divergence form is absorbed into the mass-matrix difference, so dotting
/// the first equation with the all-ones vector conserves the total mass
/// algebraically. ConvexSplit takes the logarithmic part implicitly and the
/// concave quadratic explicitly; FullyImplicit takes both at the new level.
class Model1Stepper {
 public:
  Model1Stepper(PotentialParams pot, Scheme scheme, QuadraturePolicy policy,
                NewtonOptions opts = {})
      : pot_(pot), scheme_(scheme), policy_(policy), opts_(opts) {}

  /// Nodal interpolation of u0 plus the admissibility gate
  /// |mean(u0)| * S_R < 1; beta solved from the second equation at t=0.
  PhaseState initialize(const SurfaceMesh& mesh0, const FormMatrices& forms0,
                        const Eigen::VectorXd& u0, double shrinkage_ratio) const;

  /// Newton starts from `guess` when given (delta-continuation re-solves),
  /// otherwise from the previous state.
  PhaseState step(const PhaseState& state, const SurfaceMesh& mesh_next,
                  const FormMatrices& forms_now, const FormMatrices& forms_next, double dt,
                  StepReport* report = nullptr, const PhaseState* guess = nullptr) const;

  const PotentialParams& potential() const { return pot_; }
  void set_delta(double d) { pot_.delta = d; }
  Scheme scheme() const { return scheme_; }
  QuadraturePolicy policy() const { return policy_; }

 private:
  PotentialParams pot_;
  Scheme scheme_;
  QuadraturePolicy policy_;
  NewtonOptions opts_;
};

}  // namespace evoch
