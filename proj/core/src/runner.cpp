#include "evoch/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "evoch/errors.hpp"
#include "evoch/io.hpp"

namespace evoch {

namespace {

int step_count(const RunConfig& cfg) {
  return static_cast<int>(std::llround(cfg.T / cfg.dt));
}

std::vector<double> delta_schedule(double delta, int continuation) {
  // first-step re-solves from coarse to target, delta halved in between
  std::vector<double> sched;
  for (int j = continuation; j >= 1; --j) sched.push_back(delta * std::pow(2.0, j));
  sched.push_back(delta);
  return sched;
}

}  // namespace

RunResult run_scenario(const RunConfig& cfg) {
  const SurfaceMesh mesh0 = build_reference_surface(cfg.surface, cfg.refinement);
  const FlowField flow = cfg.make_flow();
  const int nsteps = step_count(cfg);

  const Eigen::VectorXd u0 = build_initial_datum(cfg, mesh0);
  const AdmissibilityReport adm =
      admissibility_report(u0, mesh0, flow, cfg.T, std::max(2, nsteps + 1));

  const PotentialParams pot{cfg.theta, cfg.delta};
  const Model1Stepper stepper1(pot, cfg.scheme, cfg.quadrature);
  const Model2Stepper stepper2(pot, cfg.scheme, cfg.quadrature);

  SurfaceMesh mesh = mesh0;
  FormMatrices forms = assemble(mesh, flow, cfg.quadrature);
  const SpMat M0 = forms.M_rho;

  PhaseState state = cfg.model == ModelTag::Advected
                         ? stepper1.initialize(mesh, forms, u0, adm.S_R)
                         : stepper2.initialize(mesh, forms, u0);

  RunResult result;
  result.shrinkage_ratio = adm.S_R;
  result.output_directory = cfg.resolved_output_directory();
  std::filesystem::create_directories(result.output_directory);
  {
    std::ofstream echo(result.output_directory / "resolved_config.cfg");
    echo << serialize_config(cfg);
  }
  result.csv_path = result.output_directory / cfg.csv_name;
  CsvWriter csv(result.csv_path);

  const double area0 = mesh.total_area();
  double min_area = area0;
  auto push_record = [&](int step) {
    const DiagnosticsRecord r = record(state, mesh, pot, cfg.quadrature, area0 / min_area);
    result.records.push_back(r);
    csv.write_row(step, r);
  };
  auto snapshot = [&](int step) {
    write_vtk(result.output_directory / ("snapshot_" + std::to_string(step) + ".vtk"), mesh,
              state.alpha, state.beta);
  };

  push_record(0);
  snapshot(0);
  result.prefinal_state = state;
  result.final_state = state;

  try {
    for (int n = 1; n <= nsteps; ++n) {
      const double t_next = static_cast<double>(n) * cfg.dt;
      SurfaceMesh mesh_next = advance_mesh(mesh0, flow, t_next);
      FormMatrices forms_next = assemble(mesh_next, flow, cfg.quadrature);

      PhaseState next;
      if (n == 1 && cfg.delta_continuation > 0) {
        // re-solve the first step while halving delta down to the target
        PhaseState guess = state;
        for (double d : delta_schedule(cfg.delta, cfg.delta_continuation)) {
          Model1Stepper s1 = stepper1;
          Model2Stepper s2 = stepper2;
          s1.set_delta(d);
          s2.set_delta(d);
          if (cfg.model == ModelTag::Advected) {
            next = s1.step(state, mesh_next, forms, forms_next, cfg.dt, nullptr, &guess);
          } else {
            const WeightedOperators ops = make_weighted_operators(forms_next, mesh_next, M0);
            next = s2.step(state, mesh_next, ops, cfg.dt, nullptr, &guess);
          }
          guess = next;
        }
      } else if (cfg.model == ModelTag::Advected) {
        next = stepper1.step(state, mesh_next, forms, forms_next, cfg.dt);
      } else {
        const WeightedOperators ops = make_weighted_operators(forms_next, mesh_next, M0);
        next = stepper2.step(state, mesh_next, ops, cfg.dt);
      }

      result.prefinal_state = state;
      state = std::move(next);
      mesh = std::move(mesh_next);
      forms = std::move(forms_next);
      min_area = std::min(min_area, mesh.total_area());
      result.steps_completed = n;

      push_record(n);
      if (n % cfg.snapshot_every == 0) snapshot(n);
    }
    result.final_state = state;
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
    std::ofstream marker(result.output_directory / "INCOMPLETE.marker");
    marker << "run stopped after step " << result.steps_completed << ": " << e.what() << "\n";
  }
  return result;
}

const char* transport_name(TransportWhich which) {
  switch (which) {
    case TransportWhich::MForm: return "m_form";
    case TransportWhich::ASForm: return "aS_form";
    case TransportWhich::ANForm: return "aN_form";
    case TransportWhich::RhoGradForm: return "rho_grad_form";
    case TransportWhich::RhoOde: return "rho_ode";
  }
  return "?";
}

std::optional<TransportWhich> transport_from_name(const std::string& name) {
  for (TransportWhich w : {TransportWhich::MForm, TransportWhich::ASForm, TransportWhich::ANForm,
                           TransportWhich::RhoGradForm, TransportWhich::RhoOde})
    if (name == transport_name(w)) return w;
  return std::nullopt;
}

TransportTable verify_battery(const RunConfig& cfg,
                              const std::optional<std::vector<TransportWhich>>& which) {
  const SurfaceMesh mesh0 = build_reference_surface(cfg.surface, cfg.refinement);
  const FlowField flow = cfg.make_flow();

  // deterministic smooth test fields from the reference positions
  const int n = mesh0.n_vertices();
  Eigen::VectorXd eta(n), phi(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = mesh0.vertices_ref[i];
    eta[i] = p[0] + p[1] * p[2];
    phi[i] = p[1] + 0.5 * p[0] * p[2];
  }

  const std::array<double, 3> dts = {1e-2, 5e-3, 2.5e-3};
  constexpr double exact_floor = 1e-11;

  std::vector<TransportWhich> selected =
      which ? *which
            : std::vector<TransportWhich>{TransportWhich::MForm, TransportWhich::ASForm,
                                          TransportWhich::ANForm, TransportWhich::RhoGradForm,
                                          TransportWhich::RhoOde};

  TransportTable table;
  const double horizon = cfg.T > 0.0 ? cfg.T : 1.0;
  for (TransportWhich w : selected) {
    if (w == TransportWhich::RhoOde) {
      double worst = 0.0;
      for (int i = 0; i < 5; ++i) {
        const double t = horizon * static_cast<double>(i + 1) / 6.0;
        worst = std::max(worst, verify_transport_identity(mesh0, flow, w, eta, phi, t, 1e-4,
                                                          cfg.quadrature));
      }
      table.rho_ode_residual = worst;
      table.rho_ode_checked = true;
      if (worst > 1e-6) table.pass = false;
      continue;
    }
    for (int i = 0; i < 5; ++i) {
      TransportRow row;
      row.which = w;
      row.t = horizon * static_cast<double>(i + 1) / 6.0;
      for (std::size_t j = 0; j < dts.size(); ++j)
        row.residuals[j] =
            verify_transport_identity(mesh0, flow, w, eta, phi, row.t, dts[j], cfg.quadrature);
      const double worst = *std::max_element(row.residuals.begin(), row.residuals.end());
      row.exact = worst <= exact_floor;
      if (!row.exact) {
        row.orders[0] = std::log2(row.residuals[0] / row.residuals[1]);
        row.orders[1] = std::log2(row.residuals[1] / row.residuals[2]);
        if (std::min(row.orders[0], row.orders[1]) < 1.8) table.pass = false;
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

std::string format_transport_table(const TransportTable& table) {
  std::ostringstream out;
  out << "identity        t        r(1e-2)      r(5e-3)      r(2.5e-3)    order\n";
  for (const auto& row : table.rows) {
    char line[160];
    if (row.exact) {
      std::snprintf(line, sizeof(line), "%-14s %7.4f  %-12.4g %-12.4g %-12.4g exact\n",
                    transport_name(row.which), row.t, row.residuals[0], row.residuals[1],
                    row.residuals[2]);
    } else {
      std::snprintf(line, sizeof(line), "%-14s %7.4f  %-12.4g %-12.4g %-12.4g %.2f, %.2f\n",
                    transport_name(row.which), row.t, row.residuals[0], row.residuals[1],
                    row.residuals[2], row.orders[0], row.orders[1]);
    }
    out << line;
  }
  if (table.rho_ode_checked) {
    char line[120];
    std::snprintf(line, sizeof(line), "rho_ode residual at dt=1e-4: %.4g (tolerance 1e-6)\n",
                  table.rho_ode_residual);
    out << line;
  }
  out << (table.pass ? "VERIFY PASS\n" : "VERIFY FAIL\n");
  return out.str();
}

StabilitySeries stability_pair_run(const RunConfig& cfg, unsigned int perturb_seed,
                                   double perturb_size) {
  if (cfg.model != ModelTag::Weighted)
    throw PreconditionError("stability_pair_run needs a weighted-model configuration");

  const SurfaceMesh mesh0 = build_reference_surface(cfg.surface, cfg.refinement);
  const FlowField flow = cfg.make_flow();
  const int nsteps = step_count(cfg);

  const PotentialParams pot{cfg.theta, cfg.delta};
  const Model2Stepper stepper(pot, cfg.scheme, cfg.quadrature);

  FormMatrices forms = assemble(mesh0, flow, cfg.quadrature);
  const SpMat M0 = forms.M_rho;
  WeightedOperators ops = make_weighted_operators(forms, mesh0, M0);

  const Eigen::VectorXd c0 = build_initial_datum(cfg, mesh0);

  // seeded perturbation, projected to zero weighted mean, scaled in |.|_{rho,-1}
  std::mt19937 eng(perturb_seed);
  auto uniform01 = [&eng] {
    const std::uint64_t hi = eng(), lo = eng();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  };
  const int n = mesh0.n_vertices();
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = 2.0 * uniform01() - 1.0;
  const Eigen::VectorXd weighted_one = M0 * Eigen::VectorXd::Ones(n);
  q.array() -= q.dot(weighted_one) / weighted_one.sum();
  const double qnorm = rho_h_minus1_norm(ops, q);
  if (!(qnorm > 0.0)) throw SolverError("degenerate stability perturbation");
  q *= perturb_size / qnorm;

  const Eigen::VectorXd c0b = c0 + q;
  const double mean_gap = std::abs((M0 * (c0b - c0)).sum()) / mesh0.total_area();
  if (mean_gap > 1e-12)
    throw PreconditionError("stability pair means differ by " + std::to_string(mean_gap));

  PhaseState s1 = stepper.initialize(mesh0, forms, c0);
  PhaseState s2 = stepper.initialize(mesh0, forms, c0b);

  StabilitySeries series;
  series.time.push_back(0.0);
  series.distance.push_back(rho_h_minus1_norm(ops, s1.alpha - s2.alpha));
  series.d0 = series.distance.front();

  for (int step = 1; step <= nsteps; ++step) {
    const double t = static_cast<double>(step) * cfg.dt;
    SurfaceMesh mesh = advance_mesh(mesh0, flow, t);
    forms = assemble(mesh, flow, cfg.quadrature);
    ops = make_weighted_operators(forms, mesh, M0);
    s1 = stepper.step(s1, mesh, ops, cfg.dt);
    s2 = stepper.step(s2, mesh, ops, cfg.dt);
    series.time.push_back(t);
    series.distance.push_back(rho_h_minus1_norm(ops, s1.alpha - s2.alpha));
  }

  // least-squares slope of log d(t)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < series.time.size(); ++i) {
    if (!(series.distance[i] > 0.0)) continue;
    const double x = series.time[i], y = std::log(series.distance[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 0.0)
    series.fitted_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return series;
}

}  // namespace evoch
