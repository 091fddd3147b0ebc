#include "streamnav/flow_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kernels/field_term.hpp"
#include "streamnav/errors.hpp"
#include "streamnav/field_kernels.hpp"

namespace streamnav {

void validate(const SafetyMargins& margins) {
  if (!(margins.delta > 0.0) || !(margins.epsilon > 0.0)) {
    throw InvalidArgument("safety margins require delta > 0 and epsilon > 0");
  }
}

Obstacle::Obstacle(Vec2 center, double actual_radius, double planned_radius)
    : center_(center), actual_radius_(actual_radius), planned_radius_(planned_radius) {
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) {
    throw InvalidArgument("obstacle center must be finite");
  }
  if (!(actual_radius > 0.0) || !(planned_radius > actual_radius) ||
      !std::isfinite(planned_radius)) {
    std::ostringstream os;
    os << "obstacle radii must satisfy 0 < a_f < a_p (got a_f=" << actual_radius
       << ", a_p=" << planned_radius << ")";
    throw InvalidArgument(os.str());
  }
}

Obstacle Obstacle::with_margins(Vec2 center, double actual_radius,
                                const SafetyMargins& margins) {
  validate(margins);
  return Obstacle(center, actual_radius, actual_radius + margins.delta + margins.epsilon);
}

Obstacle Obstacle::failed_agent(Vec2 center, const SafetyMargins& margins) {
  return with_margins(center, margins.delta + margins.epsilon, margins);
}

Obstacle Obstacle::planned(Vec2 center, double planned_radius) {
  return Obstacle(center, 0.5 * planned_radius, planned_radius);
}

bool Obstacle::consistent_with(const SafetyMargins& margins) const {
  return std::abs(planned_radius_ - (actual_radius_ + margins.delta + margins.epsilon)) <= 1e-12;
}

FlowField::FlowField(std::vector<Obstacle> obstacles) : obstacles_(std::move(obstacles)) {
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    for (std::size_t j = i + 1; j < obstacles_.size(); ++j) {
      if (obstacles_[i].center() == obstacles_[j].center()) {
        throw InvalidArgument("obstacle centers must be pairwise distinct");
      }
    }
  }
  cx_.reserve(obstacles_.size());
  cy_.reserve(obstacles_.size());
  a2_.reserve(obstacles_.size());
  for (const auto& o : obstacles_) {
    cx_.push_back(o.center().x);
    cy_.push_back(o.center().y);
    a2_.push_back(o.planned_radius() * o.planned_radius());
  }
}

FieldSample FlowField::sample(Vec2 p) const {
  if (obstacles_.empty()) return {{p.x, p.y}, {}};
  kernels::detail::Accum acc;
  for (std::size_t k = 0; k < obstacles_.size(); ++k) {
    const double dx = p.x - cx_[k];
    const double dy = p.y - cy_[k];
    if (dx * dx + dy * dy <= kernels::detail::kGuardSq) {
      std::ostringstream os;
      os << "field evaluated at obstacle center (" << cx_[k] << ", " << cy_[k] << ")";
      throw SingularityEvaluation(os.str());
    }
    kernels::detail::add_term(acc, dx, dy, a2_[k]);
  }
  FieldSample s;
  s.value = {acc.phi, acc.psi};
  s.jacobian.dphi_dx = acc.dphi_dx;
  s.jacobian.dpsi_dy = acc.dphi_dx;
  s.jacobian.dpsi_dx = acc.dpsi_dx;
  s.jacobian.dphi_dy = -acc.dpsi_dx;
  return s;
}

std::optional<std::size_t> FlowField::nearest(Vec2 p) const {
  if (obstacles_.empty()) return std::nullopt;
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < obstacles_.size(); ++k) {
    const double dx = p.x - cx_[k];
    const double dy = p.y - cy_[k];
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = k;
    }
  }
  return best;
}

bool FlowField::inside_planned(Vec2 p) const {
  for (std::size_t k = 0; k < obstacles_.size(); ++k) {
    const double dx = p.x - cx_[k];
    const double dy = p.y - cy_[k];
    if (dx * dx + dy * dy < a2_[k]) return true;
  }
  return false;
}

double FlowField::planned_clearance(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : obstacles_) {
    best = std::min(best, distance(p, o.center()) - o.planned_radius());
  }
  return best;
}

FieldPoint eval_field(Vec2 p, const FlowField& field) { return field.sample(p).value; }

Jacobian2x2 eval_jacobian(Vec2 p, const FlowField& field) { return field.sample(p).jacobian; }

FieldBatch eval_field_batch(const FlowField& field, std::span<const double> xs,
                            std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("x and y arrays differ in length");
  FieldBatch out;
  const std::size_t n = xs.size();
  out.phi.resize(n);
  out.psi.resize(n);
  out.dphi_dx.resize(n);
  out.dpsi_dx.resize(n);
  kernels::eval_field({field.center_x(), field.center_y(), field.planned_radius_sq()}, xs, ys,
                      {out.phi, out.psi, out.dphi_dx, out.dpsi_dx});
  return out;
}

std::size_t grid_count(double lo, double hi, double step) {
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double lambda_max(const FlowField& field, const Box& domain, double grid_step) {
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw InvalidArgument("grid_step must be positive");
  }
  if (domain.degenerate()) throw InvalidArgument("lambda_max domain is degenerate");

  const std::size_t nx = grid_count(domain.x_min, domain.x_max, grid_step);
  const std::size_t ny = grid_count(domain.y_min, domain.y_max, grid_step);
  std::vector<double> xs(nx), ys(nx), s2(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    xs[i] = domain.x_min + static_cast<double>(i) * grid_step;
  }
  const kernels::Obstacles obs{field.center_x(), field.center_y(), field.planned_radius_sq()};
  double best = -1.0;
  for (std::size_t j = 0; j < ny; ++j) {
    std::fill(ys.begin(), ys.end(), domain.y_min + static_cast<double>(j) * grid_step);
    kernels::stretch_sq(obs, xs, ys, s2);
    for (double v : s2) {
      if (v > best) best = v;  // NaN (masked) never compares greater
    }
  }
  if (best < 0.0) throw EmptyDomain("no grid samples outside the planned-exclusion disks");
  return best;
}

LambdaEstimate lambda_max_checked(const FlowField& field, const Box& domain, double grid_step,
                                  double inflation) {
  if (inflation < 0.0) throw InvalidArgument("inflation must be non-negative");
  LambdaEstimate est;
  est.value = lambda_max(field, domain, grid_step);
  est.refined = lambda_max(field, domain, 0.5 * grid_step);
  est.relative_change = std::abs(est.refined - est.value) / est.value;
  est.converged = est.relative_change < 0.01;
  est.inflated = std::max(est.value, est.refined) * (1.0 + inflation);
  return est;
}

}  // namespace streamnav
