#include "evoch/model2.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "evoch/errors.hpp"
#include "newton_detail.hpp"

namespace evoch {

WeightedOperators make_weighted_operators(const FormMatrices& forms, const SurfaceMesh& mesh,
                                          const SpMat& M0) {
  WeightedOperators ops;
  ops.M0 = M0;
  ops.A_S = forms.A_S;
  ops.A_S_rho = forms.A_S_rho;
  ops.M_cur = forms.M;
  ops.M_pot_rho = forms.M_pot_rho;
  ops.rho = density(mesh);
  ops.time = forms.time;
  return ops;
}

PhaseState Model2Stepper::initialize(const SurfaceMesh& mesh0, const FormMatrices& forms0,
                                     const Eigen::VectorXd& c0) const {
  if (c0.size() != mesh0.n_vertices())
    throw ConfigError("initial datum has wrong length");
  const double amax = c0.cwiseAbs().maxCoeff();
  if (amax > 1.0)
    throw ConfigError("initial datum leaves [-1,1]: max |c0| = " + std::to_string(amax));

  double integral = 0.0;
  for (int k = 0; k < mesh0.n_triangles(); ++k) {
    const auto& tri = mesh0.triangles[k];
    integral += mesh0.elem_cache[k].area_cur / 3.0 * (c0[tri[0]] + c0[tri[1]] + c0[tri[2]]);
  }
  const double mean_abs = std::abs(integral) / mesh0.total_area();
  if (!(mean_abs < 1.0))
    throw ConfigError("initial datum is a pure phase: |mean(c0)| = " +
                      std::to_string(mean_abs) + " >= 1");

  PhaseState s;
  s.alpha = c0;
  s.time = mesh0.time;
  s.model = ModelTag::Weighted;
  s.delta_used = pot_.delta;

  // at t=0 the density is one, so the weighted and plain forms coincide
  const Eigen::VectorXd rhs = forms0.A_S * c0 + load_phi(mesh0, pot_, c0, true, policy_) -
                              forms0.M_pot_rho * c0;
  Eigen::SimplicialLLT<SpMat> llt(forms0.M_rho);
  if (llt.info() != Eigen::Success) throw SolverError("weighted mass factorization failed");
  s.beta = llt.solve(rhs);
  return s;
}

PhaseState Model2Stepper::step(const PhaseState& state, const SurfaceMesh& mesh_next,
                               const WeightedOperators& ops_next, double dt, StepReport* report,
                               const PhaseState* guess) const {
  if (!(dt > 0.0)) throw PreconditionError("step requires dt > 0");

  const SpMat A12 = dt * ops_next.A_S_rho;

  detail::SaddleProblem p;
  p.A11 = &ops_next.M0;
  p.A12 = &A12;
  p.A21 = &ops_next.A_S;
  p.A22 = &ops_next.M0;
  p.c1 = ops_next.M0 * state.alpha;
  p.mesh = &mesh_next;
  p.pot = pot_;
  p.policy = policy_;
  p.weighted = true;
  p.implicit_linear = (scheme_ == Scheme::FullyImplicit);
  p.M_pot = &ops_next.M_pot_rho;
  if (!p.implicit_linear) p.lin_const = ops_next.M_pot_rho * state.alpha;
  p.area_scale = mesh_next.total_area();

  const PhaseState& start = guess ? *guess : state;
  auto [alpha, beta] = detail::solve_saddle(p, start.alpha, start.beta, opts_, report);

  PhaseState out;
  out.alpha = std::move(alpha);
  out.beta = std::move(beta);
  out.time = mesh_next.time;
  out.model = ModelTag::Weighted;
  out.delta_used = pot_.delta;
  return out;
}

Eigen::VectorXd weighted_inverse_laplacian(const WeightedOperators& ops,
                                           const Eigen::VectorXd& f) {
  const int n = static_cast<int>(f.size());
  const Eigen::VectorXd load = ops.M0 * f;
  const double defect = load.sum();
  const double area = (ops.M_cur * Eigen::VectorXd::Ones(n)).sum();
  const double scale = std::max(1.0, area * (n > 0 ? f.cwiseAbs().maxCoeff() : 0.0));
  if (std::abs(defect) > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "weighted inverse Laplacian needs a compatible load: sum of weighted load = "
        << defect << " (tolerance " << 1e-10 * scale << ")";
    throw PreconditionError(msg.str());
  }

  // bordered system enforcing the zero-mean constraint 1^T M zeta = 0
  const Eigen::VectorXd c = ops.M_cur * Eigen::VectorXd::Ones(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(ops.A_S_rho.nonZeros()) + 2 * n);
  for (int k = 0; k < ops.A_S_rho.outerSize(); ++k)
    for (SpMat::InnerIterator it(ops.A_S_rho, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, n, c[i]);
    trip.emplace_back(n, i, c[i]);
  }
  SpMat K(n + 1, n + 1);
  K.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = load;

  Eigen::SparseLU<SpMat> lu(K);
  if (lu.info() != Eigen::Success)
    throw SolverError("bordered weighted Laplacian factorization failed");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolverError("bordered weighted Laplacian solve failed");
  return sol.head(n);
}

double rho_h_minus1_norm(const WeightedOperators& ops, const Eigen::VectorXd& f) {
  const Eigen::VectorXd zeta = weighted_inverse_laplacian(ops, f);
  return std::sqrt(std::max(0.0, zeta.dot(ops.A_S_rho * zeta)));
}

}  // namespace evoch
