#pragma once

#include <Eigen/Dense>

namespace evoch {

enum class FlowPreset { Static, BreathingSphere, EllipsoidStretch, TranslateRotate };
enum class AdvectivePreset { Zero, RigidRotation, UserTangentField };

/// Analytic evolution of the surface. Every preset is an affine map of the
/// reference point, position(p,t) = L(t) p + s(t), with position(p,0) = p.
/// The velocity field and its ambient Jacobian are derived from L and s, so
/// they are exactly consistent with the trajectories.
struct FlowField {
  FlowPreset kind = FlowPreset::Static;
  double amplitude = 0.25;  // breathing/stretch amplitude, translation speed
  double frequency = 1.0;   // oscillation or rotation rate

  AdvectivePreset advective_kind = AdvectivePreset::Zero;
  double advective_amplitude = 1.0;                       // rigid rotation rate about e_z
  Eigen::Vector3d tangent_field = Eigen::Vector3d::UnitX();  // ambient vector for UserTangentField

  Eigen::Matrix3d linear(double t) const;
  Eigen::Matrix3d linear_dt(double t) const;
  Eigen::Vector3d shift(double t) const;
  Eigen::Vector3d shift_dt(double t) const;

  Eigen::Vector3d position(const Eigen::Vector3d& p, double t) const;
  Eigen::Vector3d reference_point(const Eigen::Vector3d& x, double t) const;
  Eigen::Vector3d velocity(const Eigen::Vector3d& x, double t) const;
  /// Ambient Jacobian dV_i/dx_j at time t (constant in x for affine presets).
  Eigen::Matrix3d velocity_jacobian(double t) const;

  /// Advective velocity before tangential projection.
  Eigen::Vector3d advective_velocity(const Eigen::Vector3d& x, double t) const;

  bool is_static() const { return kind == FlowPreset::Static; }
};

/// V and its normal/tangential decomposition with respect to a unit normal,
/// plus the projected advective velocity and V_a^tau = V_tau - V_a.
struct VelocitySplit {
  Eigen::Vector3d V, V_tau, V_nu, V_a, V_a_tau;
};

VelocitySplit velocity_split(const FlowField& flow, const Eigen::Vector3d& x, double t,
                             const Eigen::Vector3d& normal);

}  // namespace evoch
