#include "evoch/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "evoch/errors.hpp"

namespace evoch {

namespace {

Eigen::Matrix3d rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

// d/dt of rot_z(w t) = w * J rot_z(w t) with J the generator.
Eigen::Matrix3d rot_z_dt(double angle, double rate) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d R;
  R << -s, -c, 0, c, -s, 0, 0, 0, 0;
  return rate * R;
}

}  // namespace

Eigen::Matrix3d FlowField::linear(double t) const {
  switch (kind) {
    case FlowPreset::Static:
      return Eigen::Matrix3d::Identity();
    case FlowPreset::BreathingSphere:
      return (1.0 + amplitude * std::sin(frequency * t)) * Eigen::Matrix3d::Identity();
    case FlowPreset::EllipsoidStretch: {
      Eigen::Matrix3d L = Eigen::Matrix3d::Identity();
      L(0, 0) = 1.0 + amplitude * std::sin(frequency * t);
      return L;
    }
    case FlowPreset::TranslateRotate:
      return rot_z(frequency * t);
  }
  throw std::logic_error("unreachable flow preset");
}

Eigen::Matrix3d FlowField::linear_dt(double t) const {
  switch (kind) {
    case FlowPreset::Static:
      return Eigen::Matrix3d::Zero();
    case FlowPreset::BreathingSphere:
      return (amplitude * frequency * std::cos(frequency * t)) * Eigen::Matrix3d::Identity();
    case FlowPreset::EllipsoidStretch: {
      Eigen::Matrix3d L = Eigen::Matrix3d::Zero();
      L(0, 0) = amplitude * frequency * std::cos(frequency * t);
      return L;
    }
    case FlowPreset::TranslateRotate:
      return rot_z_dt(frequency * t, frequency);
  }
  throw std::logic_error("unreachable flow preset");
}

Eigen::Vector3d FlowField::shift(double t) const {
  if (kind == FlowPreset::TranslateRotate) return amplitude * t * Eigen::Vector3d::UnitX();
  return Eigen::Vector3d::Zero();
}

Eigen::Vector3d FlowField::shift_dt(double t) const {
  (void)t;
  if (kind == FlowPreset::TranslateRotate) return amplitude * Eigen::Vector3d::UnitX();
  return Eigen::Vector3d::Zero();
}

Eigen::Vector3d FlowField::position(const Eigen::Vector3d& p, double t) const {
  if (kind == FlowPreset::Static) return p;
  return linear(t) * p + shift(t);
}

Eigen::Vector3d FlowField::reference_point(const Eigen::Vector3d& x, double t) const {
  if (kind == FlowPreset::Static) return x;
  return linear(t).partialPivLu().solve(x - shift(t));
}

Eigen::Vector3d FlowField::velocity(const Eigen::Vector3d& x, double t) const {
  if (kind == FlowPreset::Static) return Eigen::Vector3d::Zero();
  // V(x,t) = L'(t) L(t)^{-1} (x - s(t)) + s'(t)
  return velocity_jacobian(t) * (x - shift(t)) + shift_dt(t);
}

Eigen::Matrix3d FlowField::velocity_jacobian(double t) const {
  if (kind == FlowPreset::Static) return Eigen::Matrix3d::Zero();
  return linear_dt(t) * linear(t).inverse();
}

Eigen::Vector3d FlowField::advective_velocity(const Eigen::Vector3d& x, double t) const {
  (void)t;
  switch (advective_kind) {
    case AdvectivePreset::Zero:
      return Eigen::Vector3d::Zero();
    case AdvectivePreset::RigidRotation:
      return advective_amplitude * Eigen::Vector3d::UnitZ().cross(x);
    case AdvectivePreset::UserTangentField:
      return tangent_field;
  }
  throw std::logic_error("unreachable advective preset");
}

VelocitySplit velocity_split(const FlowField& flow, const Eigen::Vector3d& x, double t,
                             const Eigen::Vector3d& normal) {
  if (std::abs(normal.norm() - 1.0) > 1e-12)
    throw PreconditionError("velocity_split: normal is not unit length");
  VelocitySplit s;
  s.V = flow.velocity(x, t);
  s.V_nu = s.V.dot(normal) * normal;
  s.V_tau = s.V - s.V_nu;
  const Eigen::Vector3d va = flow.advective_velocity(x, t);
  s.V_a = va - va.dot(normal) * normal;  // projected if the preset is not exactly tangent
  s.V_a_tau = s.V_tau - s.V_a;
  return s;
}

}  // namespace evoch
