#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <Eigen/Dense>

#include "evoch/diagnostics.hpp"
#include "evoch/surface.hpp"

namespace evoch {

/// Append-only diagnostics writer. One full row is formatted, written and
/// flushed at a time, so a crash never leaves a partial row behind. Doubles
/// are printed with %.17g, which makes reruns byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void write_row(int step, const DiagnosticsRecord& r);
  const std::filesystem::path& path() const { return path_; }

  static constexpr const char* header =
      "step,time,mass,energy,grad_w_norm_sq,u_min,u_max,xi,mean_w,area";

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Legacy-VTK ASCII snapshot: POINTS, POLYGONS and POINT_DATA with the
/// scalar fields u and w.
void write_vtk(const std::filesystem::path& path, const SurfaceMesh& mesh,
               const Eigen::VectorXd& u, const Eigen::VectorXd& w);

std::string format_double(double v);

}  // namespace evoch
