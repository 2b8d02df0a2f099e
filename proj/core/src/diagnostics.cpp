#include "evoch/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "evoch/errors.hpp"
#include "evoch/forms.hpp"

namespace evoch {

namespace {

double p1_value(const Eigen::VectorXd& nodal, const std::array<int, 3>& tri,
                const Eigen::Vector3d& bary) {
  return bary[0] * nodal[tri[0]] + bary[1] * nodal[tri[1]] + bary[2] * nodal[tri[2]];
}

double element_divergence(const FlowField& flow, double t, const Eigen::Vector3d& normal) {
  const Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - normal * normal.transpose();
  return (P * flow.velocity_jacobian(t)).trace();
}

}  // namespace

DiagnosticsRecord record(const PhaseState& state, const SurfaceMesh& mesh,
                         const PotentialParams& pot, QuadraturePolicy policy,
                         double S_R_running) {
  const bool weighted = state.model == ModelTag::Weighted;
  const auto& qr = quadrature_points(policy);
  const std::vector<double> rho = density(mesh);

  DiagnosticsRecord r;
  r.time = state.time;
  r.S_R_running = S_R_running;
  r.u_min = state.alpha.minCoeff();
  r.u_max = state.alpha.maxCoeff();
  r.xi = 1.0 - std::max(std::abs(r.u_min), std::abs(r.u_max));
  r.separation_violation = !(r.xi > 0.0);

  double energy = 0.0;
  bool energy_defined = true;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const auto& c = mesh.elem_cache[k];
    const double A = c.area_cur;
    const double wgt = weighted ? rho[k] : 1.0;

    const double usum = state.alpha[tri[0]] + state.alpha[tri[1]] + state.alpha[tri[2]];
    const double wsum = state.beta[tri[0]] + state.beta[tri[1]] + state.beta[tri[2]];
    r.mass += wgt * A / 3.0 * usum;
    r.mean_w += A / 3.0 * wsum;
    r.area += A;

    const Eigen::Vector3d gu = tangential_gradient(mesh, state.alpha, k);
    const Eigen::Vector3d gw = tangential_gradient(mesh, state.beta, k);
    r.grad_w_norm_sq += wgt * A * gw.squaredNorm();
    energy += 0.5 * A * gu.squaredNorm();
    for (const auto& q : qr) {
      const double u = p1_value(state.alpha, tri, q.bary);
      if (pot.sharp() && std::abs(u) > 1.0) {
        energy_defined = false;
        continue;
      }
      energy += wgt * q.weight * A * F_value(u, pot);
    }
  }
  r.energy = energy_defined ? energy : std::numeric_limits<double>::quiet_NaN();
  return r;
}

namespace {

double eval_m(const SurfaceMesh& mesh, const Eigen::VectorXd& eta, const Eigen::VectorXd& phi) {
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const double A = mesh.elem_cache[k].area_cur;
    double dot = 0.0, se = 0.0, sp = 0.0;
    for (int i = 0; i < 3; ++i) {
      dot += eta[tri[i]] * phi[tri[i]];
      se += eta[tri[i]];
      sp += phi[tri[i]];
    }
    v += A / 12.0 * (se * sp + dot);
  }
  return v;
}

double eval_aS(const SurfaceMesh& mesh, const Eigen::VectorXd& eta, const Eigen::VectorXd& phi) {
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k)
    v += mesh.elem_cache[k].area_cur *
         tangential_gradient(mesh, eta, k).dot(tangential_gradient(mesh, phi, k));
  return v;
}

double eval_rho_grad(const SurfaceMesh& mesh, const Eigen::VectorXd& eta,
                     const Eigen::VectorXd& phi) {
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& c = mesh.elem_cache[k];
    v += c.area_ref / c.area_cur * c.area_cur *
         tangential_gradient(mesh, eta, k).dot(tangential_gradient(mesh, phi, k));
  }
  return v;
}

double eval_aN(const SurfaceMesh& mesh, const FlowField& flow, const Eigen::VectorXd& eta,
               const Eigen::VectorXd& phi, QuadraturePolicy policy) {
  const auto& qr = quadrature_points(policy);
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const auto& c = mesh.elem_cache[k];
    const Eigen::Vector3d gphi = tangential_gradient(mesh, phi, k);
    for (const auto& q : qr) {
      const Eigen::Vector3d xq = mesh.quad_point(k, q.bary);
      const Eigen::Vector3d va_tau = velocity_split(flow, xq, mesh.time, c.normal).V_a_tau;
      v += q.weight * c.area_cur * p1_value(eta, tri, q.bary) * va_tau.dot(gphi);
    }
  }
  return v;
}

double eval_g(const SurfaceMesh& mesh, const FlowField& flow, const Eigen::VectorXd& eta,
              const Eigen::VectorXd& phi, QuadraturePolicy policy) {
  const auto& qr = quadrature_points(policy);
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const auto& c = mesh.elem_cache[k];
    const double divk = element_divergence(flow, mesh.time, c.normal);
    for (const auto& q : qr)
      v += q.weight * c.area_cur * divk * p1_value(eta, tri, q.bary) *
           p1_value(phi, tri, q.bary);
  }
  return v;
}

double eval_b(const SurfaceMesh& mesh, const FlowField& flow, const Eigen::VectorXd& eta,
              const Eigen::VectorXd& phi) {
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& c = mesh.elem_cache[k];
    const Eigen::Matrix3d B = rate_tensor_B(
        flow, mesh.quad_point(k, Eigen::Vector3d::Constant(1.0 / 3.0)), mesh.time, c.normal);
    v += c.area_cur * (B * tangential_gradient(mesh, eta, k)).dot(tangential_gradient(mesh, phi, k));
  }
  return v;
}

double eval_aN_production(const SurfaceMesh& mesh, const FlowField& flow,
                          const Eigen::VectorXd& eta, const Eigen::VectorXd& phi,
                          QuadraturePolicy policy) {
  const auto& qr = quadrature_points(policy);
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    const auto& c = mesh.elem_cache[k];
    const Eigen::Vector3d gphi = tangential_gradient(mesh, phi, k);
    for (const auto& q : qr) {
      const Eigen::Vector3d xq = mesh.quad_point(k, q.bary);
      const Eigen::Vector3d badv = adv_tensor_Badv(flow, xq, mesh.time, c.normal);
      v += q.weight * c.area_cur * p1_value(eta, tri, q.bary) * badv.dot(gphi);
    }
  }
  return v;
}

double eval_rho_grad_production(const SurfaceMesh& mesh, const FlowField& flow,
                                const Eigen::VectorXd& eta, const Eigen::VectorXd& phi) {
  double v = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& c = mesh.elem_cache[k];
    const double rho_k = c.area_ref / c.area_cur;
    const Eigen::Matrix3d Bt = -2.0 * rate_tensor_D(
        flow, mesh.quad_point(k, Eigen::Vector3d::Constant(1.0 / 3.0)), mesh.time, c.normal);
    v += rho_k * c.area_cur *
         (Bt * tangential_gradient(mesh, eta, k)).dot(tangential_gradient(mesh, phi, k));
  }
  return v;
}

}  // namespace

double verify_transport_identity(const SurfaceMesh& base, const FlowField& flow,
                                 TransportWhich which, const Eigen::VectorXd& eta,
                                 const Eigen::VectorXd& phi, double t, double dt,
                                 QuadraturePolicy policy) {
  const SurfaceMesh mesh_m = advance_mesh(base, flow, t - dt);
  const SurfaceMesh mesh_0 = advance_mesh(base, flow, t);
  const SurfaceMesh mesh_p = advance_mesh(base, flow, t + dt);

  if (which == TransportWhich::RhoOde) {
    double worst = 0.0;
    for (int k = 0; k < base.n_triangles(); ++k) {
      const auto rho_of = [&](const SurfaceMesh& m) {
        return m.elem_cache[k].area_ref / m.elem_cache[k].area_cur;
      };
      const double fd = (rho_of(mesh_p) - rho_of(mesh_m)) / (2.0 * dt);
      const double divk = element_divergence(flow, t, mesh_0.elem_cache[k].normal);
      worst = std::max(worst, std::abs(fd + rho_of(mesh_0) * divk));
    }
    return worst;
  }

  auto form_value = [&](const SurfaceMesh& m) {
    switch (which) {
      case TransportWhich::MForm:
        return eval_m(m, eta, phi);
      case TransportWhich::ASForm:
        return eval_aS(m, eta, phi);
      case TransportWhich::ANForm:
        return eval_aN(m, flow, eta, phi, policy);
      case TransportWhich::RhoGradForm:
        return eval_rho_grad(m, eta, phi);
      default:
        throw PreconditionError("unexpected transport check");
    }
  };
  const double fd = (form_value(mesh_p) - form_value(mesh_m)) / (2.0 * dt);

  double production = 0.0;
  switch (which) {
    case TransportWhich::MForm:
      production = eval_g(mesh_0, flow, eta, phi, policy);
      break;
    case TransportWhich::ASForm:
      production = eval_b(mesh_0, flow, eta, phi);
      break;
    case TransportWhich::ANForm:
      production = eval_aN_production(mesh_0, flow, eta, phi, policy);
      break;
    case TransportWhich::RhoGradForm:
      production = eval_rho_grad_production(mesh_0, flow, eta, phi);
      break;
    default:
      break;
  }
  return std::abs(fd - production);
}

AdmissibilityReport admissibility_report(const Eigen::VectorXd& u0, const SurfaceMesh& mesh0,
                                         const FlowField& flow, double T, int sample_count) {
  if (sample_count < 2) throw PreconditionError("admissibility report needs sample_count >= 2");

  const double area0 = mesh0.total_area();
  double min_area = area0;
  for (int s = 0; s < sample_count; ++s) {
    const double t = T * static_cast<double>(s) / static_cast<double>(sample_count - 1);
    min_area = std::min(min_area, advance_mesh(mesh0, flow, t).total_area());
  }

  double integral = 0.0;
  for (int k = 0; k < mesh0.n_triangles(); ++k) {
    const auto& tri = mesh0.triangles[k];
    integral += mesh0.elem_cache[k].area_cur / 3.0 * (u0[tri[0]] + u0[tri[1]] + u0[tri[2]]);
  }

  AdmissibilityReport rep;
  rep.S_R = area0 / min_area;
  rep.mean_abs = std::abs(integral) / area0;
  rep.product = rep.mean_abs * rep.S_R;
  rep.max_m_u0 = std::abs(integral) / min_area;
  rep.admissible = rep.product < 1.0;
  return rep;
}

}  // namespace evoch
