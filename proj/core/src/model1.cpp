#include "evoch/model1.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "evoch/errors.hpp"
#include "newton_detail.hpp"

namespace evoch {

namespace {

double area_mean(const SurfaceMesh& mesh, const Eigen::VectorXd& nodal) {
  double integral = 0.0;
  for (int k = 0; k < mesh.n_triangles(); ++k) {
    const auto& tri = mesh.triangles[k];
    integral += mesh.elem_cache[k].area_cur / 3.0 *
                (nodal[tri[0]] + nodal[tri[1]] + nodal[tri[2]]);
  }
  return integral / mesh.total_area();
}

}  // namespace

PhaseState Model1Stepper::initialize(const SurfaceMesh& mesh0, const FormMatrices& forms0,
                                     const Eigen::VectorXd& u0, double shrinkage_ratio) const {
  if (u0.size() != mesh0.n_vertices())
    throw ConfigError("initial datum has wrong length");
  const double amax = u0.cwiseAbs().maxCoeff();
  if (amax > 1.0)
    throw ConfigError("initial datum leaves [-1,1]: max |u0| = " + std::to_string(amax));

  const double mean_abs = std::abs(area_mean(mesh0, u0));
  const double product = mean_abs * shrinkage_ratio;
  if (!(product < 1.0)) {
    std::ostringstream msg;
    msg << "inadmissible initial datum: |mean(u0)| * S_R = " << product
        << " >= 1 (|mean(u0)| = " << mean_abs << ", shrinkage ratio S_R = " << shrinkage_ratio
        << "); admissibility requires |mean(u0)| * S_R < 1";
    throw ConfigError(msg.str());
  }

  PhaseState s;
  s.alpha = u0;
  s.time = mesh0.time;
  s.model = ModelTag::Advected;
  s.delta_used = pot_.delta;

  // beta from A_S a + Load(a) - M b = 0 at t = 0
  const Eigen::VectorXd rhs = forms0.A_S * u0 + load_phi(mesh0, pot_, u0, false, policy_) -
                              forms0.M_pot * u0;
  Eigen::SimplicialLLT<SpMat> llt(forms0.M);
  if (llt.info() != Eigen::Success) throw SolverError("mass matrix factorization failed");
  s.beta = llt.solve(rhs);
  return s;
}

PhaseState Model1Stepper::step(const PhaseState& state, const SurfaceMesh& mesh_next,
                               const FormMatrices& forms_now, const FormMatrices& forms_next,
                               double dt, StepReport* report, const PhaseState* guess) const {
  if (!(dt > 0.0)) throw PreconditionError("step requires dt > 0");

  const SpMat A11 = forms_next.M + dt * forms_next.A_N;
  const SpMat A12 = dt * forms_next.A_S;

  detail::SaddleProblem p;
  p.A11 = &A11;
  p.A12 = &A12;
  p.A21 = &forms_next.A_S;
  p.A22 = &forms_next.M;
  p.c1 = forms_now.M * state.alpha;
  p.mesh = &mesh_next;
  p.pot = pot_;
  p.policy = policy_;
  p.weighted = false;
  p.implicit_linear = (scheme_ == Scheme::FullyImplicit);
  p.M_pot = &forms_next.M_pot;
  if (!p.implicit_linear) p.lin_const = forms_next.M_pot * state.alpha;
  p.area_scale = mesh_next.total_area();

  const PhaseState& start = guess ? *guess : state;
  auto [alpha, beta] = detail::solve_saddle(p, start.alpha, start.beta, opts_, report);

  PhaseState out;
  out.alpha = std::move(alpha);
  out.beta = std::move(beta);
  out.time = mesh_next.time;
  out.model = ModelTag::Advected;
  out.delta_used = pot_.delta;
  return out;
}

}  // namespace evoch
