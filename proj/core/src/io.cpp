#include "evoch/io.hpp"

#include <cstdio>

#include "evoch/errors.hpp"

namespace evoch {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw ConfigError("cannot open CSV for writing: " + path.string());
  out_ << header << "\n";
  out_.flush();
}

void CsvWriter::write_row(int step, const DiagnosticsRecord& r) {
  std::string row = std::to_string(step);
  for (double v : {r.time, r.mass, r.energy, r.grad_w_norm_sq, r.u_min, r.u_max, r.xi,
                   r.mean_w, r.area})
    row += "," + format_double(v);
  row += "\n";
  out_ << row;
  out_.flush();
}

void write_vtk(const std::filesystem::path& path, const SurfaceMesh& mesh,
               const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open VTK for writing: " + path.string());
  out << "# vtk DataFile Version 3.0\n";
  out << "evoch surface snapshot t=" << format_double(mesh.time) << "\n";
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& x : mesh.vertices_cur)
    out << format_double(x[0]) << " " << format_double(x[1]) << " " << format_double(x[2])
        << "\n";
  out << "POLYGONS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
  for (const auto& tri : mesh.triangles)
    out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  out << "POINT_DATA " << mesh.n_vertices() << "\n";
  out << "SCALARS u double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.n_vertices(); ++i) out << format_double(u[i]) << "\n";
  out << "SCALARS w double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int i = 0; i < mesh.n_vertices(); ++i) out << format_double(w[i]) << "\n";
  out.flush();
}

}  // namespace evoch
