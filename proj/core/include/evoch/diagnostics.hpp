#pragma once

#include <Eigen/Dense>

#include "evoch/flow.hpp"
#include "evoch/model1.hpp"
#include "evoch/potential.hpp"
#include "evoch/quadrature.hpp"
#include "evoch/surface.hpp"

namespace evoch {

/// Per-step certified scalars. mass is the conserved quantity of the model
/// (int u for the advected model, int rho c for the weighted one); energy and
/// the dissipation use the density weight for the weighted model. xi is the
/// separation margin 1 - max |u| over the nodes.
struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_w_norm_sq = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double xi = 0.0;
  double mean_w = 0.0;
  double area = 0.0;
  double S_R_running = 1.0;
  bool separation_violation = false;
};

DiagnosticsRecord record(const PhaseState& state, const SurfaceMesh& mesh,
                         const PotentialParams& pot, QuadraturePolicy policy,
                         double S_R_running);

enum class TransportWhich { MForm, ASForm, ANForm, RhoGradForm, RhoOde };

/// |centered finite difference of the form value - predicted production|,
/// with eta and phi held as fixed nodal vectors transported by the mesh.
/// The productions, with vanishing material derivatives, are
///   d/dt m(eta,phi)              = g(eta,phi)
///   d/dt a_S(eta,phi)            = b(eta,phi)
///   d/dt a_N(eta,phi)            = int B_adv eta . grad phi
///   d/dt (grad eta, grad phi)_rho = int rho (-2 D(V)) grad eta . grad phi
/// RhoOde instead returns the max element defect of
/// |pdot rho + rho div_G V| along trajectories.
double verify_transport_identity(const SurfaceMesh& base, const FlowField& flow,
                                 TransportWhich which, const Eigen::VectorXd& eta,
                                 const Eigen::VectorXd& phi, double t, double dt,
                                 QuadraturePolicy policy);

struct AdmissibilityReport {
  double S_R = 1.0;       // discrete max of |Gamma_0| / |Gamma(t)|
  double mean_abs = 0.0;  // |mean of u0 over Gamma_0|
  double product = 0.0;   // mean_abs * S_R
  double max_m_u0 = 0.0;  // max over samples of |int u0| / |Gamma(t)|
  bool admissible = false;
};

/// Samples |Gamma(t)| on a uniform grid over [0,T] (sample_count >= 2 points)
/// and evaluates the admissibility product.
AdmissibilityReport admissibility_report(const Eigen::VectorXd& u0, const SurfaceMesh& mesh0,
                                         const FlowField& flow, double T, int sample_count);

}  // namespace evoch
