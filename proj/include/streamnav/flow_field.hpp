#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "streamnav/geometry.hpp"
#include "streamnav/safety_margins.hpp"

namespace streamnav {

/// Points closer than this to an obstacle center are treated as the singularity.
inline constexpr double kSingularityGuard = 1e-9;

/// No-fly zone around a failed agent.
///
/// The flow only sees the planned radius; the actual radius is the cylinder
/// the failed vehicle is guaranteed to stay within.
class Obstacle {
 public:
  /// Throws InvalidArgument unless 0 < actual_radius < planned_radius.
  Obstacle(Vec2 center, double actual_radius, double planned_radius);

  /// a_p = a_f + delta + epsilon.
  static Obstacle with_margins(Vec2 center, double actual_radius, const SafetyMargins& margins);

  /// A failed vehicle hovering within delta of its setpoint: a_f = delta + epsilon.
  static Obstacle failed_agent(Vec2 center, const SafetyMargins& margins);

  /// Obstacle defined only by its planned radius (contour export, tests);
  /// the actual radius is set to half of it.
  static Obstacle planned(Vec2 center, double planned_radius);

  const Vec2& center() const { return center_; }
  double actual_radius() const { return actual_radius_; }
  double planned_radius() const { return planned_radius_; }

  /// True when planned_radius == actual_radius + delta + epsilon to within 1e-12.
  bool consistent_with(const SafetyMargins& margins) const;

  friend bool operator==(const Obstacle&, const Obstacle&) = default;

 private:
  Vec2 center_;
  double actual_radius_;
  double planned_radius_;
};

struct FieldPoint {
  double phi = 0.0;
  double psi = 0.0;
};

/// Derivatives of (phi, psi). Only two entries are independent; the other two
/// follow from Cauchy-Riemann and are returned from the same values.
struct Jacobian2x2 {
  double dphi_dx = 1.0;
  double dphi_dy = 0.0;
  double dpsi_dx = 0.0;
  double dpsi_dy = 1.0;

  double determinant() const { return dphi_dx * dpsi_dy - dphi_dy * dpsi_dx; }
  /// phi_x^2 + phi_y^2, the local squared stretch of the conformal map.
  double stretch_sq() const { return dphi_dx * dphi_dx + dphi_dy * dphi_dy; }
};

struct FieldSample {
  FieldPoint value;
  Jacobian2x2 jacobian;
};

/// Superposition of uniform flow and one doublet per obstacle.
///
/// With no obstacles the field is the identity map (phi = x, psi = y).
/// Immutable after construction; safe to share across threads.
class FlowField {
 public:
  FlowField() = default;
  /// Throws InvalidArgument if two centers coincide.
  explicit FlowField(std::vector<Obstacle> obstacles);

  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  bool empty() const { return obstacles_.empty(); }
  std::size_t size() const { return obstacles_.size(); }

  /// Structure-of-arrays view used by the batch kernels.
  std::span<const double> center_x() const { return cx_; }
  std::span<const double> center_y() const { return cy_; }
  std::span<const double> planned_radius_sq() const { return a2_; }

  /// Throws SingularityEvaluation within kSingularityGuard of a center.
  FieldSample sample(Vec2 p) const;

  /// Index of the obstacle whose center is closest to p.
  std::optional<std::size_t> nearest(Vec2 p) const;

  /// True if p lies in any open planned-exclusion disk.
  bool inside_planned(Vec2 p) const;

  /// min over obstacles of |p - c| - a_p; +inf for an empty field.
  double planned_clearance(Vec2 p) const;

  friend bool operator==(const FlowField& a, const FlowField& b) {
    return a.obstacles_ == b.obstacles_;
  }

 private:
  std::vector<Obstacle> obstacles_;
  std::vector<double> cx_, cy_, a2_;
};

FieldPoint eval_field(Vec2 p, const FlowField& field);
Jacobian2x2 eval_jacobian(Vec2 p, const FlowField& field);

/// Batch evaluation over structure-of-arrays points using the active kernel.
/// Points within the singularity guard produce NaN in every output.
struct FieldBatch {
  std::vector<double> phi, psi, dphi_dx, dpsi_dx;
};
FieldBatch eval_field_batch(const FlowField& field, std::span<const double> xs,
                            std::span<const double> ys);

/// Maximum of phi_x^2 + phi_y^2 over grid samples of `domain` that lie
/// outside every open planned-exclusion disk. Grid nodes are
/// x_min + i*grid_step up to x_max (inclusive within 1e-9 of a step).
///
/// Throws InvalidArgument for grid_step <= 0 or a degenerate box, and
/// EmptyDomain when no grid node survives the exclusion mask.
double lambda_max(const FlowField& field, const Box& domain, double grid_step);

struct LambdaEstimate {
  double value = 0.0;          ///< grid maximum at the requested step
  double refined = 0.0;        ///< grid maximum at half the step
  double relative_change = 0;  ///< |refined - value| / value
  bool converged = false;      ///< relative_change < 1%
  double inflated = 0.0;       ///< max(value, refined) * (1 + inflation)
};

/// Richardson-style sanity check around lambda_max: evaluates at the step and
/// at half the step, and reports an optionally inflated upper bound.
LambdaEstimate lambda_max_checked(const FlowField& field, const Box& domain, double grid_step,
                                  double inflation = 0.0);

/// Number of grid nodes along one axis for [lo, hi] at `step`.
std::size_t grid_count(double lo, double hi, double step);

}  // namespace streamnav
