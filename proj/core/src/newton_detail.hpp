#pragma once

// Shared damped-Newton driver for the mixed systems of both models:
//   R1 = A11 a + A12 b - c1                          (linear)
//   R2 = A21 a + LoadPhi(a) - Lin(a or a_old) - A22 b
// The Jacobian is refactorized every iteration (direct sparse LU). One extra
// full-step iteration runs after the residual test passes, which drives the
// linear block to factorization roundoff and with it the discrete mass
// identity.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "evoch/errors.hpp"
#include "evoch/forms.hpp"
#include "evoch/model1.hpp"

namespace evoch::detail {

struct SaddleProblem {
  const SpMat* A11;
  const SpMat* A12;
  const SpMat* A21;
  const SpMat* A22;
  Eigen::VectorXd c1;
  const SurfaceMesh* mesh = nullptr;
  PotentialParams pot;
  QuadraturePolicy policy = QuadraturePolicy::Midpoint3;
  bool weighted = false;
  bool implicit_linear = false;   // FullyImplicit: linear part at the new level
  const SpMat* M_pot = nullptr;   // quadrature mass for the linear part
  Eigen::VectorXd lin_const;      // ConvexSplit: M_pot * a_old
  double area_scale = 1.0;
};

inline void append_block(std::vector<Eigen::Triplet<double>>& trip, const SpMat& m,
                         int row0, int col0, double scale = 1.0) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      trip.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()),
                        scale * it.value());
}

inline Eigen::VectorXd saddle_residual(const SaddleProblem& p, const Eigen::VectorXd& a,
                                       const Eigen::VectorXd& b) {
  const Eigen::VectorXd r1 = (*p.A11) * a + (*p.A12) * b - p.c1;
  Eigen::VectorXd r2 = (*p.A21) * a + load_phi(*p.mesh, p.pot, a, p.weighted, p.policy) -
                       (*p.A22) * b;
  if (p.implicit_linear)
    r2 -= (*p.M_pot) * a;
  else
    r2 -= p.lin_const;
  Eigen::VectorXd r(2 * a.size());
  r << r1, r2;
  return r;
}

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_saddle(
    const SaddleProblem& p, Eigen::VectorXd a, Eigen::VectorXd b, const NewtonOptions& opts,
    StepReport* report) {
  const int n = static_cast<int>(a.size());
  const double tol = opts.tol_scale * p.area_scale;
  const Interval guard = newton_safeguard_region(p.pot);

  std::vector<double> history;
  Eigen::SparseLU<SpMat> lu;

  auto newton_direction = [&](const Eigen::VectorXd& aa, const Eigen::VectorXd& residual) {
    const SpMat dphi = load_phi_jacobian(*p.mesh, p.pot, aa, p.weighted, p.policy);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(p.A11->nonZeros() + p.A12->nonZeros() +
                                          p.A21->nonZeros() + p.A22->nonZeros() +
                                          dphi.nonZeros()) +
                 (p.implicit_linear ? p.M_pot->nonZeros() : 0));
    append_block(trip, *p.A11, 0, 0);
    append_block(trip, *p.A12, 0, n);
    append_block(trip, *p.A21, n, 0);
    append_block(trip, dphi, n, 0);
    if (p.implicit_linear) append_block(trip, *p.M_pot, n, 0, -1.0);
    append_block(trip, *p.A22, n, n, -1.0);
    SpMat jac(2 * n, 2 * n);
    jac.setFromTriplets(trip.begin(), trip.end());
    lu.compute(jac);
    if (lu.info() != Eigen::Success) throw SolverError("Newton Jacobian factorization failed");
    Eigen::VectorXd delta = lu.solve(-residual);
    if (lu.info() != Eigen::Success) throw SolverError("Newton linear solve breakdown");
    return delta;
  };

  auto damping_factor = [&](const Eigen::VectorXd& aa, const Eigen::VectorXd& da) {
    // nodal values bound the quadrature values of the P1 interpolant
    double s = 1.0;
    for (int h = 0; h < opts.max_halvings; ++h) {
      const Eigen::VectorXd cand = aa + s * da;
      const double lo = cand.minCoeff(), hi = cand.maxCoeff();
      if (lo >= guard.lo && hi <= guard.hi) return s;
      s *= 0.5;
    }
    if (p.pot.sharp()) {
      const Eigen::VectorXd cand = aa + s * da;
      if (cand.cwiseAbs().maxCoeff() >= 1.0)
        throw SolverError("Newton iterate left the sharp potential domain after " +
                          std::to_string(opts.max_halvings) + " halvings");
    }
    return s;
  };

  bool converged = false;
  Eigen::VectorXd residual;
  for (int it = 0; it < opts.max_iterations; ++it) {
    residual = saddle_residual(p, a, b);
    const double norm = residual.cwiseAbs().maxCoeff();
    history.push_back(norm);
    if (norm <= tol) {
      converged = true;
      break;
    }
    const Eigen::VectorXd delta = newton_direction(a, residual);
    const double s = damping_factor(a, delta.head(n));
    a += s * delta.head(n);
    b += s * delta.tail(n);
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Newton did not converge in " << opts.max_iterations
        << " iterations (tol " << tol << "); residual history:";
    for (double r : history) msg << " " << r;
    throw SolverError(msg.str());
  }

  // polish: one undamped iteration pins the linear block at LU roundoff
  const Eigen::VectorXd delta = newton_direction(a, residual);
  a += delta.head(n);
  b += delta.tail(n);
  history.push_back(saddle_residual(p, a, b).cwiseAbs().maxCoeff());

  if (report) {
    report->iterations = static_cast<int>(history.size()) - 1;
    report->residual_history = std::move(history);
  }
  return {std::move(a), std::move(b)};
}

}  // namespace evoch::detail
