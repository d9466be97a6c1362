#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "vmfem/forms.hpp"
#include "vmfem/verification.hpp"

namespace vmfem {

/// Columns k, h, dofs, err_u, ord_u, err_rho, ord_rho, err_T, ord_T; orders
/// of the first level are empty.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
/// Columns Ma, diff_p, diff_rho.
void write_ap_csv(std::ostream& out, const ApReport& report);

/// VTK legacy ASCII unstructured grid with point data `rho` (the first scalar
/// block), `T` and `u_magnitude`. With subdivisions = 1 the points are the
/// mesh vertices; with m > 1 each triangle is split into m^2 triangles
/// sampled on its own lattice, so high-order fields show inside elements.
void write_vtk(std::ostream& out, const TaylorHoodSpaces& spaces, const StateLayout& layout, const Eigen::VectorXd& x,
               int subdivisions = 1, const std::string& title = "vmfem fields");
void write_vtk_file(const std::string& path, const TaylorHoodSpaces& spaces, const StateLayout& layout,
                    const Eigen::VectorXd& x, int subdivisions = 1);

} // namespace vmfem
