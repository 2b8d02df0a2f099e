#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evoch/config.hpp"
#include "evoch/diagnostics.hpp"
#include "evoch/errors.hpp"
#include "evoch/runner.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const evoch::RunConfig cfg = evoch::parse_config(config_path);
  const evoch::RunResult result = evoch::run_scenario(cfg);
  if (result.failed) {
    std::cerr << "run failed after " << result.steps_completed << " steps: " << result.error
              << "\n";
    std::cerr << "partial output in " << result.output_directory.string() << "\n";
    return 2;
  }
  const auto& last = result.records.back();
  std::printf("completed %d steps to t=%.6g\n", result.steps_completed, last.time);
  std::printf("  mass %.12g   energy %.12g   xi %.6g   area %.10g\n", last.mass, last.energy,
              last.xi, last.area);
  std::printf("  output: %s\n", result.csv_path.string().c_str());
  return 0;
}

int cmd_verify(const std::string& config_path, const std::vector<std::string>& which_names) {
  const evoch::RunConfig cfg = evoch::parse_config(config_path);
  std::optional<std::vector<evoch::TransportWhich>> which;
  if (!which_names.empty()) {
    which.emplace();
    for (const auto& name : which_names) {
      const auto w = evoch::transport_from_name(name);
      if (!w)
        throw evoch::ConfigError(
            "unknown identity `" + name +
            "` (expected m_form, aS_form, aN_form, rho_grad_form or rho_ode)");
      which->push_back(*w);
    }
  }
  const evoch::TransportTable table = evoch::verify_battery(cfg, which);
  std::cout << evoch::format_transport_table(table);
  return table.pass ? 0 : 3;
}

int cmd_admissibility(const std::string& config_path, int samples) {
  const evoch::RunConfig cfg = evoch::parse_config(config_path);
  const evoch::SurfaceMesh mesh0 = evoch::build_reference_surface(cfg.surface, cfg.refinement);
  const Eigen::VectorXd u0 = evoch::build_initial_datum(cfg, mesh0);
  const evoch::AdmissibilityReport rep =
      evoch::admissibility_report(u0, mesh0, cfg.make_flow(), cfg.T, samples);
  std::printf("shrinkage ratio S_R        = %.12g\n", rep.S_R);
  std::printf("|mean(u0)|                 = %.12g\n", rep.mean_abs);
  std::printf("|mean(u0)| * S_R           = %.12g\n", rep.product);
  std::printf("max_t |int u0| / |Gamma(t)| = %.12g\n", rep.max_m_u0);
  std::printf("verdict: %s\n", rep.admissible ? "admissible" : "rejected");
  return rep.admissible ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolving-surface Cahn-Hilliard simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> which_names;
  int samples = 201;

  auto* run = app.add_subcommand("run", "run a scenario and write CSV + VTK output");
  run->add_option("config", config_path, "configuration file")->required();

  auto* verify = app.add_subcommand("verify", "transport-identity battery on the configured flow");
  verify->add_option("config", config_path, "configuration file")->required();
  verify->add_option("--which", which_names,
                     "subset of identities: m_form aS_form aN_form rho_grad_form rho_ode");

  auto* adm = app.add_subcommand("admissibility", "report the initial-datum admissibility gate");
  adm->add_option("config", config_path, "configuration file")->required();
  adm->add_option("--samples", samples, "area samples over [0,T] (default 201)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (verify->parsed()) return cmd_verify(config_path, which_names);
    if (adm->parsed()) return cmd_admissibility(config_path, samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
