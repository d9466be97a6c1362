#include "vmfem/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace vmfem {

namespace {

// shortest text that reads back to the same double
std::string num(double v) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

std::string order(double v) { return std::isnan(v) ? std::string() : num(v); }

struct Sample {
  int element;
  Point ref;
};

} // namespace

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "k,h,dofs,err_u,ord_u,err_rho,ord_rho,err_T,ord_T\n";
  for (const auto& r : report.rows)
    out << r.k << ',' << num(r.h) << ',' << r.dofs << ',' << num(r.err_u) << ',' << order(r.ord_u) << ','
        << num(r.err_rho) << ',' << order(r.ord_rho) << ',' << num(r.err_T) << ',' << order(r.ord_T) << '\n';
}

void write_ap_csv(std::ostream& out, const ApReport& report) {
  out << "Ma,diff_p,diff_rho\n";
  for (const auto& r : report.rows) out << num(r.mach) << ',' << num(r.diff_p) << ',' << num(r.diff_rho) << '\n';
}

void write_vtk(std::ostream& out, const TaylorHoodSpaces& spaces, const StateLayout& layout, const Eigen::VectorXd& x,
               int subdivisions, const std::string& title) {
  if (subdivisions < 1) throw InvalidArgument("subdivisions must be at least 1");
  if (x.size() != layout.size()) throw InvalidArgument("state has the wrong size");
  const Mesh& mesh = spaces.mesh();
  const int ne = static_cast<int>(mesh.num_elements());
  const std::array<Point, 3> corners{Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

  std::vector<Sample> samples;
  std::vector<Point> coords;
  std::vector<std::array<int, 3>> cells;
  if (subdivisions == 1) {
    samples.assign(mesh.num_vertices(), Sample{-1, Point::Zero()});
    for (int e = 0; e < ne; ++e)
      for (int l = 0; l < 3; ++l) {
        const int v = mesh.elements()[e][l];
        if (samples[v].element < 0) samples[v] = Sample{e, corners[l]};
      }
    coords = mesh.vertices();
    cells = mesh.elements();
  } else {
    const int m = subdivisions;
    auto id = [m](int i, int j) { return j * (m + 1) - j * (j - 1) / 2 + i; };
    for (int e = 0; e < ne; ++e) {
      const int base = static_cast<int>(samples.size());
      for (int j = 0; j <= m; ++j)
        for (int i = 0; i + j <= m; ++i) {
          const Point ref(static_cast<double>(i) / m, static_cast<double>(j) / m);
          samples.push_back({e, ref});
          coords.push_back(mesh.to_physical(e, ref));
        }
      for (int j = 0; j < m; ++j)
        for (int i = 0; i + j < m; ++i) {
          cells.push_back({base + id(i, j), base + id(i + 1, j), base + id(i, j + 1)});
          if (i + j + 2 <= m) cells.push_back({base + id(i + 1, j), base + id(i + 1, j + 1), base + id(i, j + 1)});
        }
    }
  }

  const Eigen::VectorXd a = x.segment(0, layout.scalar);
  const Eigen::VectorXd u = x.segment(layout.offset_u(), layout.velocity);
  const Eigen::VectorXd T = x.segment(layout.offset_T(), layout.scalar);

  out.precision(std::numeric_limits<double>::max_digits10);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << coords.size() << " double\n";
  for (const auto& p : coords) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << cells.size() << ' ' << 4 * cells.size() << '\n';
  for (const auto& c : cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << cells.size() << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) out << "5\n";

  out << "POINT_DATA " << coords.size() << '\n';
  out << "SCALARS rho double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : samples) out << evaluate(spaces.density, a, s.element, s.ref) << '\n';
  out << "SCALARS T double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : samples) out << evaluate(spaces.temperature, T, s.element, s.ref) << '\n';
  out << "SCALARS u_magnitude double 1\nLOOKUP_TABLE default\n";
  for (const auto& s : samples) out << evaluate_vector(spaces.velocity, u, s.element, s.ref).norm() << '\n';
}

void write_vtk_file(const std::string& path, const TaylorHoodSpaces& spaces, const StateLayout& layout,
                    const Eigen::VectorXd& x, int subdivisions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vtk(out, spaces, layout, x, subdivisions);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace vmfem
