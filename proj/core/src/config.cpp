#include "evoch/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "evoch/errors.hpp"

namespace evoch {

FlowField RunConfig::make_flow() const {
  FlowField f;
  f.kind = flow;
  f.amplitude = flow_amplitude;
  f.frequency = flow_frequency;
  f.advective_kind = advective;
  f.advective_amplitude = advective_amplitude;
  f.tangent_field = tangent_field;
  return f;
}

std::filesystem::path RunConfig::resolved_output_directory() const {
  const char* root = std::getenv("EVOCH_OUTPUT_ROOT");
  if (root && *root) return std::filesystem::path(root) / output_directory;
  return std::filesystem::path(output_directory);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

class KeyValues {
 public:
  KeyValues(const std::string& text, const std::string& origin) : origin_(origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin_ + ":" + std::to_string(lineno) +
                          ": expected `key = value`, got `" + line + "`");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError(origin_ + ":" + std::to_string(lineno) + ": empty key or value");
      if (values_.count(key))
        throw ConfigError(origin_ + ": duplicate key `" + key + "`");
      values_[key] = value;
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key) {
    used_.insert(key);
    return values_.at(key);
  }

  std::string require(const std::string& key) {
    if (!has(key)) throw ConfigError(origin_ + ": missing required key `" + key + "`");
    return get(key);
  }

  double get_double(const std::string& key) {
    const std::string v = get(key);
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": key `" + key + "` is not a number: `" + v + "`");
    }
  }

  long get_int(const std::string& key) {
    const std::string v = get(key);
    try {
      std::size_t pos = 0;
      const long d = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(origin_ + ": key `" + key + "` is not an integer: `" + v + "`");
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_) {
      (void)value;
      if (!used_.count(key))
        throw ConfigError(origin_ + ": unknown key `" + key + "`");
    }
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

template <typename T>
T pick(KeyValues& kv, const std::string& key, const std::map<std::string, T>& allowed,
       bool required, T fallback) {
  if (!kv.has(key)) {
    if (required) throw ConfigError(kv.origin() + ": missing required key `" + key + "`");
    return fallback;
  }
  const std::string v = kv.get(key);
  const auto it = allowed.find(v);
  if (it == allowed.end()) {
    std::string options;
    for (const auto& [name, val] : allowed) {
      (void)val;
      options += (options.empty() ? "" : ", ") + name;
    }
    throw ConfigError(kv.origin() + ": key `" + key + "` has unknown value `" + v +
                      "` (expected one of: " + options + ")");
  }
  return it->second;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  KeyValues kv(text, origin);
  RunConfig cfg;

  cfg.model = pick<ModelTag>(kv, "model",
                             {{"advected", ModelTag::Advected}, {"weighted", ModelTag::Weighted}},
                             true, ModelTag::Advected);
  cfg.surface = pick<SurfacePreset>(kv, "surface.preset",
                                    {{"unit_sphere", SurfacePreset::UnitSphere}}, true,
                                    SurfacePreset::UnitSphere);
  if (kv.has("surface.refinement")) cfg.refinement = static_cast<int>(kv.get_int("surface.refinement"));
  if (cfg.refinement < 0 || cfg.refinement > 7)
    throw ConfigError(origin + ": surface.refinement must be in [0,7], got " +
                      std::to_string(cfg.refinement));

  cfg.flow = pick<FlowPreset>(kv, "flow.preset",
                              {{"static", FlowPreset::Static},
                               {"breathing_sphere", FlowPreset::BreathingSphere},
                               {"ellipsoid_stretch", FlowPreset::EllipsoidStretch},
                               {"translate_rotate", FlowPreset::TranslateRotate}},
                              true, FlowPreset::Static);
  if (kv.has("flow.amplitude")) cfg.flow_amplitude = kv.get_double("flow.amplitude");
  if (kv.has("flow.frequency")) cfg.flow_frequency = kv.get_double("flow.frequency");

  const bool any_advective = kv.has("advective.preset") || kv.has("advective.amplitude") ||
                             kv.has("advective.cx") || kv.has("advective.cy") ||
                             kv.has("advective.cz");
  if (cfg.model == ModelTag::Weighted && any_advective)
    throw ConfigError(origin +
                      ": advective.* keys are rejected for model = weighted (the weighted "
                      "model carries no separate advective velocity)");
  cfg.advective = pick<AdvectivePreset>(kv, "advective.preset",
                                        {{"zero", AdvectivePreset::Zero},
                                         {"rigid_rotation", AdvectivePreset::RigidRotation},
                                         {"user_tangent_field", AdvectivePreset::UserTangentField}},
                                        false, AdvectivePreset::Zero);
  if (kv.has("advective.amplitude")) cfg.advective_amplitude = kv.get_double("advective.amplitude");
  if (kv.has("advective.cx")) cfg.tangent_field[0] = kv.get_double("advective.cx");
  if (kv.has("advective.cy")) cfg.tangent_field[1] = kv.get_double("advective.cy");
  if (kv.has("advective.cz")) cfg.tangent_field[2] = kv.get_double("advective.cz");

  cfg.theta = kv.has("theta") ? kv.get_double("theta")
                              : throw ConfigError(origin + ": missing required key `theta`");
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
    throw ConfigError(origin + ": theta must satisfy 0 < theta < 1, got " +
                      std::to_string(cfg.theta));
  if (kv.has("delta")) cfg.delta = kv.get_double("delta");
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0))
    throw ConfigError(origin + ": delta must satisfy 0 <= delta < 1, got " +
                      std::to_string(cfg.delta));
  if (kv.has("delta_continuation"))
    cfg.delta_continuation = static_cast<int>(kv.get_int("delta_continuation"));
  if (cfg.delta_continuation < 0 || cfg.delta_continuation > 40)
    throw ConfigError(origin + ": delta_continuation must be in [0,40]");

  cfg.T = kv.has("T") ? kv.get_double("T")
                      : throw ConfigError(origin + ": missing required key `T`");
  if (!(cfg.T >= 0.0)) throw ConfigError(origin + ": T must be >= 0");
  cfg.dt = kv.has("dt") ? kv.get_double("dt")
                        : throw ConfigError(origin + ": missing required key `dt`");
  if (!(cfg.dt > 0.0)) throw ConfigError(origin + ": dt must be > 0");

  cfg.scheme = pick<Scheme>(kv, "scheme",
                            {{"convex_split", Scheme::ConvexSplit},
                             {"fully_implicit", Scheme::FullyImplicit}},
                            false, Scheme::ConvexSplit);
  cfg.quadrature = pick<QuadraturePolicy>(kv, "quadrature",
                                          {{"lumped", QuadraturePolicy::Lumped},
                                           {"midpoint3", QuadraturePolicy::Midpoint3},
                                           {"gauss6", QuadraturePolicy::Gauss6}},
                                          false, QuadraturePolicy::Midpoint3);

  cfg.u0 = pick<U0Preset>(kv, "u0.preset",
                          {{"constant", U0Preset::Constant},
                           {"random_uniform", U0Preset::RandomUniform},
                           {"harmonic_patch", U0Preset::HarmonicPatch}},
                          false, U0Preset::Constant);
  if (kv.has("u0.value")) cfg.u0_value = kv.get_double("u0.value");
  if (kv.has("u0.seed")) cfg.u0_seed = static_cast<unsigned int>(kv.get_int("u0.seed"));
  if (kv.has("u0.amplitude")) cfg.u0_amplitude = kv.get_double("u0.amplitude");
  if (kv.has("u0.mean")) cfg.u0_mean = kv.get_double("u0.mean");

  if (kv.has("output.directory")) cfg.output_directory = kv.get("output.directory");
  if (kv.has("output.snapshot_every"))
    cfg.snapshot_every = static_cast<int>(kv.get_int("output.snapshot_every"));
  if (cfg.snapshot_every < 1)
    throw ConfigError(origin + ": output.snapshot_every must be >= 1");
  if (kv.has("output.csv_name")) cfg.csv_name = kv.get("output.csv_name");

  kv.reject_unknown();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* name_of(FlowPreset p) {
  switch (p) {
    case FlowPreset::Static: return "static";
    case FlowPreset::BreathingSphere: return "breathing_sphere";
    case FlowPreset::EllipsoidStretch: return "ellipsoid_stretch";
    case FlowPreset::TranslateRotate: return "translate_rotate";
  }
  return "?";
}

const char* name_of(AdvectivePreset p) {
  switch (p) {
    case AdvectivePreset::Zero: return "zero";
    case AdvectivePreset::RigidRotation: return "rigid_rotation";
    case AdvectivePreset::UserTangentField: return "user_tangent_field";
  }
  return "?";
}

const char* name_of(U0Preset p) {
  switch (p) {
    case U0Preset::Constant: return "constant";
    case U0Preset::RandomUniform: return "random_uniform";
    case U0Preset::HarmonicPatch: return "harmonic_patch";
  }
  return "?";
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "model = " << (cfg.model == ModelTag::Advected ? "advected" : "weighted") << "\n";
  out << "surface.preset = unit_sphere\n";
  out << "surface.refinement = " << cfg.refinement << "\n";
  out << "flow.preset = " << name_of(cfg.flow) << "\n";
  out << "flow.amplitude = " << fmt(cfg.flow_amplitude) << "\n";
  out << "flow.frequency = " << fmt(cfg.flow_frequency) << "\n";
  if (cfg.model == ModelTag::Advected) {
    out << "advective.preset = " << name_of(cfg.advective) << "\n";
    out << "advective.amplitude = " << fmt(cfg.advective_amplitude) << "\n";
    if (cfg.advective == AdvectivePreset::UserTangentField) {
      out << "advective.cx = " << fmt(cfg.tangent_field[0]) << "\n";
      out << "advective.cy = " << fmt(cfg.tangent_field[1]) << "\n";
      out << "advective.cz = " << fmt(cfg.tangent_field[2]) << "\n";
    }
  }
  out << "theta = " << fmt(cfg.theta) << "\n";
  out << "delta = " << fmt(cfg.delta) << "\n";
  out << "delta_continuation = " << cfg.delta_continuation << "\n";
  out << "T = " << fmt(cfg.T) << "\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "scheme = " << (cfg.scheme == Scheme::ConvexSplit ? "convex_split" : "fully_implicit")
      << "\n";
  out << "quadrature = "
      << (cfg.quadrature == QuadraturePolicy::Lumped
              ? "lumped"
              : cfg.quadrature == QuadraturePolicy::Midpoint3 ? "midpoint3" : "gauss6")
      << "\n";
  out << "u0.preset = " << name_of(cfg.u0) << "\n";
  switch (cfg.u0) {
    case U0Preset::Constant:
      out << "u0.value = " << fmt(cfg.u0_value) << "\n";
      break;
    case U0Preset::RandomUniform:
      out << "u0.seed = " << cfg.u0_seed << "\n";
      out << "u0.amplitude = " << fmt(cfg.u0_amplitude) << "\n";
      out << "u0.mean = " << fmt(cfg.u0_mean) << "\n";
      break;
    case U0Preset::HarmonicPatch:
      out << "u0.amplitude = " << fmt(cfg.u0_amplitude) << "\n";
      out << "u0.mean = " << fmt(cfg.u0_mean) << "\n";
      break;
  }
  out << "output.directory = " << cfg.output_directory << "\n";
  out << "output.snapshot_every = " << cfg.snapshot_every << "\n";
  out << "output.csv_name = " << cfg.csv_name << "\n";
  return out.str();
}

Eigen::VectorXd build_initial_datum(const RunConfig& cfg, const SurfaceMesh& mesh0) {
  const int n = mesh0.n_vertices();
  Eigen::VectorXd u(n);
  switch (cfg.u0) {
    case U0Preset::Constant:
      u.setConstant(cfg.u0_value);
      return u;
    case U0Preset::HarmonicPatch:
      for (int i = 0; i < n; ++i)
        u[i] = cfg.u0_mean + cfg.u0_amplitude * mesh0.vertices_ref[i][2];
      break;
    case U0Preset::RandomUniform: {
      // generator "mt19937-u53 v1": two 32-bit words -> one 53-bit uniform
      std::mt19937 eng(cfg.u0_seed);
      auto uniform01 = [&eng] {
        const std::uint64_t hi = eng(), lo = eng();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
      };
      for (int i = 0; i < n; ++i)
        u[i] = cfg.u0_mean + cfg.u0_amplitude * (2.0 * uniform01() - 1.0);
      break;
    }
  }
  // shift so the area mean hits the requested mean exactly
  double integral = 0.0;
  for (int k = 0; k < mesh0.n_triangles(); ++k) {
    const auto& tri = mesh0.triangles[k];
    integral += mesh0.elem_cache[k].area_cur / 3.0 * (u[tri[0]] + u[tri[1]] + u[tri[2]]);
  }
  u.array() += cfg.u0_mean - integral / mesh0.total_area();
  return u;
}

}  // namespace evoch
