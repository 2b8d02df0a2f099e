#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "evoch/flow.hpp"
#include "evoch/model1.hpp"
#include "evoch/quadrature.hpp"
#include "evoch/surface.hpp"

namespace evoch {

enum class U0Preset { Constant, RandomUniform, HarmonicPatch };

/// Fully resolved run configuration. The file format is flat `key = value`
/// lines with `#` comments; unknown keys are errors and every default that
/// was applied is echoed into the output directory as resolved_config.cfg.
struct RunConfig {
  ModelTag model = ModelTag::Advected;

  SurfacePreset surface = SurfacePreset::UnitSphere;
  int refinement = 3;

  FlowPreset flow = FlowPreset::Static;
  double flow_amplitude = 0.25;
  double flow_frequency = 1.0;

  AdvectivePreset advective = AdvectivePreset::Zero;
  double advective_amplitude = 1.0;
  Eigen::Vector3d tangent_field = Eigen::Vector3d::UnitX();

  double theta = 0.0;  // required, (0,1)
  double delta = 1e-4;
  int delta_continuation = 0;

  double T = 0.0;   // required, >= 0
  double dt = 0.0;  // required, > 0

  Scheme scheme = Scheme::ConvexSplit;
  QuadraturePolicy quadrature = QuadraturePolicy::Midpoint3;

  U0Preset u0 = U0Preset::Constant;
  double u0_value = 0.0;
  unsigned int u0_seed = 1;
  double u0_amplitude = 0.1;
  double u0_mean = 0.0;

  std::string output_directory = "evoch_out";
  int snapshot_every = 50;
  std::string csv_name = "diagnostics.csv";

  bool operator==(const RunConfig&) const = default;

  FlowField make_flow() const;
  /// Output directory, honoring the EVOCH_OUTPUT_ROOT environment override.
  std::filesystem::path resolved_output_directory() const;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Serialization that parse_config_text round-trips to the same RunConfig.
std::string serialize_config(const RunConfig& cfg);

/// Nodal initial datum on the reference surface.
/// RandomUniform draws i.i.d. values mean + amplitude*(2u-1) from a seeded
/// mt19937 (53-bit uniforms, generator "mt19937-u53 v1"), then shifts them so
/// the area mean hits the requested mean exactly.
Eigen::VectorXd build_initial_datum(const RunConfig& cfg, const SurfaceMesh& mesh0);

}  // namespace evoch
