#include "streamnav/field_export.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "streamnav/errors.hpp"

namespace streamnav {

namespace {

std::vector<double> split_numbers(const std::string& s, char sep, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || tok.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidArgument(std::string("cannot parse ") + what + " value '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FieldGridExport sample_field_grid(const FlowField& field, const Box& bbox, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("grid step must be positive");
  if (bbox.degenerate()) throw InvalidArgument("bounding box is degenerate");

  FieldGridExport g{field, bbox, step, grid_count(bbox.x_min, bbox.x_max, step),
                    grid_count(bbox.y_min, bbox.y_max, step), {}};
  g.rows.reserve(g.nx * g.ny);
  std::vector<double> xs(g.nx), ys(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) xs[i] = bbox.x_min + static_cast<double>(i) * step;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double y = bbox.y_min + static_cast<double>(j) * step;
    std::fill(ys.begin(), ys.end(), y);
    const FieldBatch b = eval_field_batch(field, xs, ys);
    for (std::size_t i = 0; i < g.nx; ++i) {
      GridRow row{xs[i], y, std::nullopt, std::nullopt};
      if (!field.inside_planned({xs[i], y}) && !std::isnan(b.phi[i])) {
        row.phi = b.phi[i];
        row.psi = b.psi[i];
      }
      g.rows.push_back(row);
    }
  }
  return g;
}

void write_field_csv(std::ostream& out, const FieldGridExport& g) {
  out << "# streamnav field grid v1\n";
  out << "# obstacles (x,y,a_f,a_p):";
  for (const auto& o : g.field.obstacles()) {
    out << ' ' << num(o.center().x) << ',' << num(o.center().y) << ',' << num(o.actual_radius())
        << ',' << num(o.planned_radius()) << ';';
  }
  out << '\n';
  out << "# bbox: " << num(g.bbox.x_min) << ',' << num(g.bbox.x_max) << ',' << num(g.bbox.y_min)
      << ',' << num(g.bbox.y_max) << '\n';
  out << "# step: " << num(g.step) << '\n';
  out << "# nx: " << g.nx << " ny: " << g.ny << '\n';
  out << "x,y,phi,psi\n";
  for (const auto& r : g.rows) {
    out << num(r.x) << ',' << num(r.y) << ',';
    if (r.phi) out << num(*r.phi);
    out << ',';
    if (r.psi) out << num(*r.psi);
    out << '\n';
  }
}

std::vector<Obstacle> parse_obstacle_spec(const std::string& spec) {
  std::vector<Obstacle> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto v = split_numbers(item, ',', "obstacle");
    if (v.size() != 3) throw InvalidArgument("obstacle must be x,y,a_p (got '" + item + "')");
    out.push_back(Obstacle::planned({v[0], v[1]}, v[2]));
  }
  return out;
}

Box parse_bbox(const std::string& spec) {
  const auto v = split_numbers(spec, ',', "bbox");
  if (v.size() != 4) throw InvalidArgument("bbox must be x_min,x_max,y_min,y_max");
  Box b{v[0], v[1], v[2], v[3]};
  if (b.degenerate()) throw InvalidArgument("bounding box is degenerate");
  return b;
}

}  // namespace streamnav
