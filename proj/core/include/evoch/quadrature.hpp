#pragma once

#include <vector>

#include <Eigen/Dense>

namespace evoch {

/// Quadrature for velocity-dependent and nonlinear integrands. Mass and
/// stiffness use exact affine-element integration regardless of the policy.
enum class QuadraturePolicy { Lumped, Midpoint3, Gauss6 };

struct QuadPoint {
  Eigen::Vector3d bary;  // barycentric coordinates
  double weight;         // relative weight, sums to 1 over the rule
};

inline const std::vector<QuadPoint>& quadrature_points(QuadraturePolicy policy) {
  static const std::vector<QuadPoint> lumped = {
      {{1, 0, 0}, 1.0 / 3.0}, {{0, 1, 0}, 1.0 / 3.0}, {{0, 0, 1}, 1.0 / 3.0}};
  static const std::vector<QuadPoint> midpoint3 = {
      {{0.5, 0.5, 0.0}, 1.0 / 3.0}, {{0.0, 0.5, 0.5}, 1.0 / 3.0}, {{0.5, 0.0, 0.5}, 1.0 / 3.0}};
  // degree-4 rule, 6 points
  static const std::vector<QuadPoint> gauss6 = [] {
    const double w1 = 0.223381589678011, a1 = 0.445948490915965;
    const double w2 = 0.109951743655322, a2 = 0.091576213509771;
    std::vector<QuadPoint> q;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d b1(a1, a1, a1), b2(a2, a2, a2);
      b1[i] = 1.0 - 2.0 * a1;
      b2[i] = 1.0 - 2.0 * a2;
      q.push_back({b1, w1});
      q.push_back({b2, w2});
    }
    return q;
  }();
  switch (policy) {
    case QuadraturePolicy::Lumped:
      return lumped;
    case QuadraturePolicy::Midpoint3:
      return midpoint3;
    case QuadraturePolicy::Gauss6:
      return gauss6;
  }
  return midpoint3;
}

}  // namespace evoch
