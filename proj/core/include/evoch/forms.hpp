#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "evoch/flow.hpp"
#include "evoch/potential.hpp"
#include "evoch/quadrature.hpp"
#include "evoch/surface.hpp"

namespace evoch {

using SpMat = Eigen::SparseMatrix<double>;

/// Bilinear forms on the current mesh, one vertex ordering throughout.
///   M        mass,                int chi_i chi_j            (exact)
///   G        divergence-weighted, int chi_i chi_j div_G V    (quadrature)
///   A_N      advection,           (A_N)_ij = int chi_j V_a^tau . grad chi_i
///   A_S      stiffness,           int grad chi_i . grad chi_j (exact)
///   B_mat    rate form,           int B(V) grad chi_i . grad chi_j
///   M_rho    density-weighted mass (time-invariant, equals M at t=0)
///   A_S_rho  density-weighted stiffness
///   M_pot    mass under the nonlinear-integrand quadrature rule
///   M_pot_rho  its density-weighted version
struct FormMatrices {
  SpMat M, G, A_N, A_S, B_mat, M_rho, A_S_rho;
  SpMat M_pot, M_pot_rho;
  double time = 0.0;
};

FormMatrices assemble(const SurfaceMesh& mesh, const FlowField& flow, QuadraturePolicy policy);

/// B(V) = (div_G V) I - 2 D(V) with D(V) = P sym(grad V) P the tangentially
/// projected symmetrized rate tensor, P = I - n n^T.
Eigen::Matrix3d rate_tensor_B(const FlowField& flow, const Eigen::Vector3d& x, double t,
                              const Eigen::Vector3d& normal);

Eigen::Matrix3d rate_tensor_D(const FlowField& flow, const Eigen::Vector3d& x, double t,
                              const Eigen::Vector3d& normal);

/// B_adv(V_a^tau, V)_i = (pdot V_a^tau)_i + (div_G V)(V_a^tau)_i
///                       - sum_j (V_a^tau)_j D_j^G V_i.
/// The material derivative of V_a^tau follows the trajectory through x and
/// transports the facet normal by the cofactor of the flow's linear part;
/// it is evaluated by centered differences with step 1e-5.
Eigen::Vector3d adv_tensor_Badv(const FlowField& flow, const Eigen::Vector3d& x, double t,
                                const Eigen::Vector3d& normal);

/// Quadrature of ((theta/2) phi_delta(u_h) - u_h) chi_j, optionally weighted
/// by the per-element density. Throws DomainError for the sharp potential
/// when any nodal value reaches |r| >= 1.
Eigen::VectorXd nonlinear_load(const SurfaceMesh& mesh, const PotentialParams& p,
                               const Eigen::VectorXd& nodal, bool weighted,
                               QuadraturePolicy policy);

/// Convex part of the load only: quadrature of (theta/2) phi_delta(u_h) chi_j.
Eigen::VectorXd load_phi(const SurfaceMesh& mesh, const PotentialParams& p,
                         const Eigen::VectorXd& nodal, bool weighted, QuadraturePolicy policy);

/// Jacobian of load_phi with respect to the nodal values (mass pattern).
SpMat load_phi_jacobian(const SurfaceMesh& mesh, const PotentialParams& p,
                        const Eigen::VectorXd& nodal, bool weighted, QuadraturePolicy policy);

}  // namespace evoch
