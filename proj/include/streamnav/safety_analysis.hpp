#pragma once

#include <optional>
#include <span>
#include <vector>

#include "streamnav/flow_field.hpp"
#include "streamnav/geometry.hpp"
#include "streamnav/safety_margins.hpp"
#include "streamnav/scenario_log.hpp"

namespace streamnav {

/// Non-strict comparisons in both safety conditions accept this much
/// shortfall, so configurations built exactly on the boundary pass.
inline constexpr double kBoundaryTolerance = 1e-9;

enum class Verdict { Pass, Fail, NotApplicable };

const char* to_string(Verdict v);

struct SafetyReport {
  double p_min0 = 0.0;       ///< min pairwise distance in the phi-psi plane
  double lambda_max = 0.0;   ///< bound used in the general condition
  double d_min0 = 0.0;       ///< min pairwise distance in the x-y plane
  Verdict theorem1 = Verdict::NotApplicable;
  Verdict theorem2 = Verdict::NotApplicable;
  std::optional<double> theorem1_margin;  ///< p_min0 / sqrt(lambda_max) - 2(delta + epsilon), m
  std::optional<double> theorem2_margin;  ///< d_min0 - (2(delta + epsilon) + a_p), m
  std::optional<double> lambda_relative_change;  ///< step-halving change of lambda_max

  bool theorem1_satisfied() const { return theorem1 == Verdict::Pass; }
  bool theorem2_satisfied() const { return theorem2 == Verdict::Pass; }
};

/// min over i != j of |p_i - p_j|. Requires at least two points.
double min_pairwise_distance(std::span<const Vec2> points);

/// min over i != j of the phi-psi distance between the images of p_i and p_j.
double min_phi_psi_distance(std::span<const Vec2> points, const FlowField& field);

struct Theorem1Options {
  double grid_step = 0.01;
  double lambda_inflation = 0.0;  ///< e.g. 0.05 to inflate lambda_max by 5%
  bool refine = false;            ///< also evaluate at half step and report the change
};

/// General multi-obstacle condition: p_min0^2 / lambda_max >= 4 (delta + epsilon)^2,
/// with lambda_max taken over `domain` minus the open planned disks.
/// Throws InvalidArgument for fewer than two positions, AgentInsideExclusion,
/// and EmptyDomain.
SafetyReport check_theorem1(std::span<const Vec2> positions, const FlowField& field,
                            const SafetyMargins& margins, const Box& domain,
                            const Theorem1Options& opts = {});

/// Pure form of the single-obstacle condition d_min0 >= 2(delta + epsilon) + a_p.
bool theorem2_condition(double d_min0, const SafetyMargins& margins, double a_p);

/// Single-obstacle condition on the configuration at failure time.
/// Throws NotApplicable unless the field has exactly one obstacle.
SafetyReport check_theorem2(std::span<const Vec2> positions, const FlowField& field,
                            const SafetyMargins& margins);

/// As above with an explicit planned radius (the caller vouches for |F| = 1).
SafetyReport check_theorem2(std::span<const Vec2> positions, const SafetyMargins& margins,
                            double a_p);

struct SeparationSample {
  double time = 0.0;
  std::optional<double> d_min_commanded;   ///< absent with fewer than two healthy agents
  std::optional<double> d_min_actual;      ///< absent without actual positions
  std::optional<double> clearance_commanded;  ///< min |r - c| - a_f; absent without obstacles
  std::optional<double> clearance_actual;
};

/// Per-step separation and no-fly clearance over healthy agents, using the
/// field recorded for each step.
std::vector<SeparationSample> monitor_separations(const ScenarioLog& log,
                                                  const SafetyMargins& margins);

/// Same, but every step is measured against `field`.
std::vector<SeparationSample> monitor_separations(const ScenarioLog& log,
                                                  const SafetyMargins& margins,
                                                  const FlowField& field);

struct SeparationSummary {
  std::optional<double> min_d_commanded;
  std::optional<double> min_d_actual;
  std::optional<double> min_clearance_commanded;
  std::optional<double> min_clearance_actual;
  bool separation_ok = true;  ///< every commanded d_min >= 2(delta + epsilon)
  bool clearance_ok = true;   ///< every actual (else commanded) clearance >= epsilon
};

SeparationSummary summarize(std::span<const SeparationSample> samples,
                            const SafetyMargins& margins);

}  // namespace streamnav
