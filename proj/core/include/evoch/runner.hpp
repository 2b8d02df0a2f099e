#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evoch/config.hpp"
#include "evoch/diagnostics.hpp"
#include "evoch/model1.hpp"
#include "evoch/model2.hpp"

namespace evoch {

struct RunResult {
  int steps_completed = 0;
  bool failed = false;
  std::string error;
  std::vector<DiagnosticsRecord> records;
  std::filesystem::path output_directory;
  std::filesystem::path csv_path;
  double shrinkage_ratio = 1.0;
  PhaseState prefinal_state;  // state entering the last step (empty when < 1 step ran)
  PhaseState final_state;
};

/// Full scenario: initialize, step loop, diagnostics, CSV and VTK output.
/// Writes resolved_config.cfg next to the CSV; on step failure flushes the
/// partial trajectory and leaves an INCOMPLETE.marker file.
RunResult run_scenario(const RunConfig& cfg);

struct TransportRow {
  TransportWhich which;
  double t = 0.0;
  std::array<double, 3> residuals{};  // dt = 1e-2, 5e-3, 2.5e-3
  std::array<double, 2> orders{};     // Richardson slopes between consecutive dts
  bool exact = false;                 // residuals at the roundoff floor
};

struct TransportTable {
  std::vector<TransportRow> rows;
  double rho_ode_residual = 0.0;  // at dt = 1e-4
  bool rho_ode_checked = false;
  bool pass = true;
};

/// Transport-identity battery across the configured flow at five sampled
/// times. Fails (pass = false) when any non-exact Richardson order drops
/// below 1.8 or the density ODE residual exceeds 1e-6.
TransportTable verify_battery(const RunConfig& cfg,
                              const std::optional<std::vector<TransportWhich>>& which = {});

std::string format_transport_table(const TransportTable& table);

struct StabilitySeries {
  std::vector<double> time;
  std::vector<double> distance;   // || c1 - c2 ||_{rho,-1} per step
  double fitted_rate = 0.0;       // least-squares slope of log d(t)
  double d0 = 0.0;
};

/// Two weighted-model trajectories from equal-mean initial data; the second
/// datum adds a seeded zero-weighted-mean perturbation scaled to
/// perturb_size in the rho-weighted H^-1 norm at t=0.
StabilitySeries stability_pair_run(const RunConfig& cfg, unsigned int perturb_seed,
                                   double perturb_size);

const char* transport_name(TransportWhich which);
std::optional<TransportWhich> transport_from_name(const std::string& name);

}  // namespace evoch
