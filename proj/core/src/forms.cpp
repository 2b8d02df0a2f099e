#include "evoch/forms.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "evoch/errors.hpp"

namespace evoch {

namespace {

Eigen::Matrix3d tangential_projector(const Eigen::Vector3d& n) {
  return Eigen::Matrix3d::Identity() - n * n.transpose();
}

double surface_divergence(const Eigen::Matrix3d& jac_v, const Eigen::Vector3d& n) {
  return (tangential_projector(n) * jac_v).trace();
}

// Facet normal transported by the affine flow from time t to time s
// (Nanson): n(s) ~ cof(L(s) L(t)^-1) n(t).
Eigen::Vector3d transported_normal(const FlowField& flow, const Eigen::Vector3d& n, double t,
                                   double s) {
  const Eigen::Matrix3d rel = flow.linear(s) * flow.linear(t).inverse();
  const Eigen::Vector3d m = rel.determinant() * rel.inverse().transpose() * n;
  return m.normalized();
}

}  // namespace

Eigen::Matrix3d rate_tensor_D(const FlowField& flow, const Eigen::Vector3d& x, double t,
                              const Eigen::Vector3d& normal) {
  (void)x;
  const Eigen::Matrix3d P = tangential_projector(normal);
  const Eigen::Matrix3d jac = flow.velocity_jacobian(t);
  const Eigen::Matrix3d sym = 0.5 * (jac + jac.transpose());
  return P * sym * P;
}

Eigen::Matrix3d rate_tensor_B(const FlowField& flow, const Eigen::Vector3d& x, double t,
                              const Eigen::Vector3d& normal) {
  if (std::abs(normal.norm() - 1.0) > 1e-12)
    throw PreconditionError("rate_tensor_B: normal is not unit length");
  const double div = surface_divergence(flow.velocity_jacobian(t), normal);
  return div * Eigen::Matrix3d::Identity() - 2.0 * rate_tensor_D(flow, x, t, normal);
}

Eigen::Vector3d adv_tensor_Badv(const FlowField& flow, const Eigen::Vector3d& x, double t,
                                const Eigen::Vector3d& normal) {
  const Eigen::Matrix3d jac = flow.velocity_jacobian(t);
  const double div = surface_divergence(jac, normal);
  const Eigen::Vector3d f = velocity_split(flow, x, t, normal).V_a_tau;

  // pdot V_a^tau by centered differences along the material trajectory
  const double h = 1e-5;
  const Eigen::Vector3d p = flow.reference_point(x, t);
  auto sample = [&](double s) {
    const Eigen::Vector3d xs = flow.position(p, s);
    const Eigen::Vector3d ns = transported_normal(flow, normal, t, s);
    return velocity_split(flow, xs, s, ns).V_a_tau;
  };
  const Eigen::Vector3d pdot = (sample(t + h) - sample(t - h)) / (2.0 * h);

  return pdot + div * f - jac * f;
}

FormMatrices assemble(const SurfaceMesh& mesh, const FlowField& flow, QuadraturePolicy policy) {
  const int n = mesh.n_vertices();
  const double t = mesh.time;
  const auto& qr = quadrature_points(policy);
  const std::vector<double> rho = density(mesh);

  using T = Eigen::Triplet<double>;
  std::vector<T> tM, tG, tAN, tAS, tB, tMr, tASr, tMp, tMpr;
  const std::size_t guess = static_cast<std::size_t>(mesh.n_triangles()) * 9;
  for (auto* v : {&tM, &tG, &tAN, &tAS, &tB, &tMr, &tASr, &tMp, &tMpr}) v->reserve(guess);

  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const auto& c = mesh.elem_cache[k];
    const double A = c.area_cur;
    const double rk = rho[k];

    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double mass = A / 12.0 * (i == j ? 2.0 : 1.0);
        const double stiff = A * c.grad[i].dot(c.grad[j]);
        tM.emplace_back(tri[i], tri[j], mass);
        tAS.emplace_back(tri[i], tri[j], stiff);
        tMr.emplace_back(tri[i], tri[j], rk * mass);
        tASr.emplace_back(tri[i], tri[j], rk * stiff);
      }
    }

    // affine presets: jacobian constant in x, so B and div are per-element
    const Eigen::Matrix3d Bk =
        rate_tensor_B(flow, mesh.quad_point(k, Eigen::Vector3d::Constant(1.0 / 3.0)), t, c.normal);
    const double divk = surface_divergence(flow.velocity_jacobian(t), c.normal);

    for (const auto& q : qr) {
      const double w = q.weight * A;
      const Eigen::Vector3d xq = mesh.quad_point(k, q.bary);
      const Eigen::Vector3d va_tau = velocity_split(flow, xq, t, c.normal).V_a_tau;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double mq = w * q.bary[i] * q.bary[j];
          tMp.emplace_back(tri[i], tri[j], mq);
          tMpr.emplace_back(tri[i], tri[j], rk * mq);
          tG.emplace_back(tri[i], tri[j], mq * divk);
          // (A_N)_ij = a_N(chi_j, chi_i): trial in the zero-order slot,
          // test carries the gradient
          tAN.emplace_back(tri[i], tri[j], w * q.bary[j] * va_tau.dot(c.grad[i]));
          tB.emplace_back(tri[i], tri[j], w * (Bk * c.grad[i]).dot(c.grad[j]));
        }
      }
    }
  }

  FormMatrices f;
  f.time = t;
  auto build = [n](std::vector<T>& trip) {
    SpMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  };
  f.M = build(tM);
  f.G = build(tG);
  f.A_N = build(tAN);
  f.A_S = build(tAS);
  f.B_mat = build(tB);
  f.M_rho = build(tMr);
  f.A_S_rho = build(tASr);
  f.M_pot = build(tMp);
  f.M_pot_rho = build(tMpr);
  return f;
}

namespace {

void check_load_domain(const PotentialParams& p, const Eigen::VectorXd& nodal) {
  if (!p.sharp()) return;
  for (int i = 0; i < nodal.size(); ++i)
    if (std::abs(nodal[i]) >= 1.0)
      throw DomainError("sharp potential load with nodal value " + std::to_string(nodal[i]) +
                        " at vertex " + std::to_string(i));
}

template <typename PointFn>
Eigen::VectorXd assemble_load(const SurfaceMesh& mesh, const Eigen::VectorXd& nodal,
                              bool weighted, QuadraturePolicy policy, PointFn&& value) {
  const auto& qr = quadrature_points(policy);
  const std::vector<double> rho = weighted ? density(mesh) : std::vector<double>{};
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nodal.size());
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const double A = mesh.elem_cache[k].area_cur;
    const double wk = weighted ? rho[k] : 1.0;
    for (const auto& q : qr) {
      const double u = q.bary[0] * nodal[tri[0]] + q.bary[1] * nodal[tri[1]] +
                       q.bary[2] * nodal[tri[2]];
      const double g = wk * q.weight * A * value(u);
      for (int i = 0; i < 3; ++i) out[tri[i]] += g * q.bary[i];
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd nonlinear_load(const SurfaceMesh& mesh, const PotentialParams& p,
                               const Eigen::VectorXd& nodal, bool weighted,
                               QuadraturePolicy policy) {
  check_load_domain(p, nodal);
  return assemble_load(mesh, nodal, weighted, policy,
                       [&](double u) { return 0.5 * p.theta * phi(u, p) - u; });
}

Eigen::VectorXd load_phi(const SurfaceMesh& mesh, const PotentialParams& p,
                         const Eigen::VectorXd& nodal, bool weighted, QuadraturePolicy policy) {
  check_load_domain(p, nodal);
  return assemble_load(mesh, nodal, weighted, policy,
                       [&](double u) { return 0.5 * p.theta * phi(u, p); });
}

SpMat load_phi_jacobian(const SurfaceMesh& mesh, const PotentialParams& p,
                        const Eigen::VectorXd& nodal, bool weighted, QuadraturePolicy policy) {
  check_load_domain(p, nodal);
  const auto& qr = quadrature_points(policy);
  const std::vector<double> rho = weighted ? density(mesh) : std::vector<double>{};
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const double A = mesh.elem_cache[k].area_cur;
    const double wk = weighted ? rho[k] : 1.0;
    for (const auto& q : qr) {
      const double u = q.bary[0] * nodal[tri[0]] + q.bary[1] * nodal[tri[1]] +
                       q.bary[2] * nodal[tri[2]];
      const double g = 0.5 * p.theta * phi_prime(u, p) * wk * q.weight * A;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          trip.emplace_back(tri[i], tri[j], g * q.bary[i] * q.bary[j]);
    }
  }
  SpMat m(nodal.size(), nodal.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace evoch
