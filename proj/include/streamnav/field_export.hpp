#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "streamnav/flow_field.hpp"
#include "streamnav/geometry.hpp"

namespace streamnav {

struct GridRow {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> phi;  ///< empty inside a planned-exclusion disk
  std::optional<double> psi;
};

/// Rectangular (x, y, phi, psi) samples for contour plotting. Rows are
/// ordered y-major: row index = j * nx + i.
struct FieldGridExport {
  FlowField field;
  Box bbox;
  double step = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<GridRow> rows;
};

/// Samples the field on the grid with the batch kernels. Throws
/// InvalidArgument for a degenerate box or non-positive step.
FieldGridExport sample_field_grid(const FlowField& field, const Box& bbox, double step);

/// CSV with '#'-prefixed metadata lines, a header `x,y,phi,psi`, then nx*ny
/// rows. Masked cells leave phi and psi empty.
void write_field_csv(std::ostream& out, const FieldGridExport& grid);

/// "x,y,a_p;x,y,a_p;..." (planned radius only). Throws InvalidArgument.
std::vector<Obstacle> parse_obstacle_spec(const std::string& spec);

/// "x_min,x_max,y_min,y_max". Throws InvalidArgument.
Box parse_bbox(const std::string& spec);

}  // namespace streamnav
