#ifndef EAW_VTK_HPP
#define EAW_VTK_HPP

#include <Eigen/Dense>
#include <string>

#include "eaw/space.hpp"

namespace eaw {

/// Legacy-ASCII VTK unstructured grid of one region, sampled on the element
/// subtriangulation (points are duplicated per element so jumps survive).
/// Vector spaces write a 3-component VECTORS field plus u_x/u_y scalars;
/// scalar spaces a single SCALARS field.
void write_vtk_field(const std::string& path, const DgSpace& space,
                     const Eigen::VectorXd& coeffs, const std::string& field_name);

}  // namespace eaw

#endif
