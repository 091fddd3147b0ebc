#include "streamnav/safety_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "streamnav/errors.hpp"

namespace streamnav {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::NotApplicable:
      return "not-applicable";
  }
  return "?";
}

double min_pairwise_distance(std::span<const Vec2> points) {
  if (points.size() < 2) throw InvalidArgument("pairwise distance needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, distance(points[i], points[j]));
    }
  }
  return best;
}

double min_phi_psi_distance(std::span<const Vec2> points, const FlowField& field) {
  std::vector<Vec2> images;
  images.reserve(points.size());
  for (const Vec2& p : points) {
    const FieldPoint f = eval_field(p, field);
    images.push_back({f.phi, f.psi});
  }
  return min_pairwise_distance(images);
}

namespace {

void require_outside(std::span<const Vec2> positions, const FlowField& field) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (field.inside_planned(positions[i])) {
      std::ostringstream os;
      os << "position " << i << " is inside a planned-exclusion disk";
      throw AgentInsideExclusion(static_cast<int>(i), os.str());
    }
  }
}

}  // namespace

SafetyReport check_theorem1(std::span<const Vec2> positions, const FlowField& field,
                            const SafetyMargins& margins, const Box& domain,
                            const Theorem1Options& opts) {
  validate(margins);
  if (positions.size() < 2) throw InvalidArgument("theorem 1 needs at least two agents");
  require_outside(positions, field);

  SafetyReport rep;
  rep.p_min0 = min_phi_psi_distance(positions, field);
  rep.d_min0 = min_pairwise_distance(positions);
  if (opts.refine) {
    const LambdaEstimate est =
        lambda_max_checked(field, domain, opts.grid_step, opts.lambda_inflation);
    rep.lambda_max = est.inflated;
    rep.lambda_relative_change = est.relative_change;
  } else {
    rep.lambda_max = lambda_max(field, domain, opts.grid_step) * (1.0 + opts.lambda_inflation);
  }
  const double guaranteed = rep.p_min0 / std::sqrt(rep.lambda_max);
  rep.theorem1_margin = guaranteed - margins.separation_floor();
  rep.theorem1 = *rep.theorem1_margin >= -kBoundaryTolerance ? Verdict::Pass : Verdict::Fail;
  return rep;
}

bool theorem2_condition(double d_min0, const SafetyMargins& margins, double a_p) {
  return d_min0 - (margins.separation_floor() + a_p) >= -kBoundaryTolerance;
}

SafetyReport check_theorem2(std::span<const Vec2> positions, const SafetyMargins& margins,
                            double a_p) {
  validate(margins);
  if (!(a_p > 0.0)) throw InvalidArgument("planned radius must be positive");
  SafetyReport rep;
  rep.d_min0 = min_pairwise_distance(positions);
  rep.theorem2_margin = rep.d_min0 - (margins.separation_floor() + a_p);
  rep.theorem2 = theorem2_condition(rep.d_min0, margins, a_p) ? Verdict::Pass : Verdict::Fail;
  return rep;
}

SafetyReport check_theorem2(std::span<const Vec2> positions, const FlowField& field,
                            const SafetyMargins& margins) {
  if (field.size() != 1) {
    std::ostringstream os;
    os << "theorem 2 covers exactly one failed agent, field has " << field.size();
    throw NotApplicable(os.str());
  }
  require_outside(positions, field);
  SafetyReport rep = check_theorem2(positions, margins, field.obstacles().front().planned_radius());
  rep.p_min0 = min_phi_psi_distance(positions, field);
  return rep;
}

namespace {

std::optional<double> min_distance(const std::vector<Vec2>& pts) {
  if (pts.size() < 2) return std::nullopt;
  return min_pairwise_distance(pts);
}

std::optional<double> min_clearance(const std::vector<Vec2>& pts, const FlowField& field) {
  if (field.empty() || pts.empty()) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : pts) {
    for (const auto& o : field.obstacles()) {
      best = std::min(best, distance(p, o.center()) - o.actual_radius());
    }
  }
  return best;
}

SeparationSample measure(const StepRecord& rec, const FlowField& field) {
  SeparationSample s;
  s.time = rec.time;
  std::vector<Vec2> cmd, act;
  bool have_actual = true;
  for (const AgentRecord& a : rec.agents) {
    if (!a.healthy) continue;
    cmd.push_back(a.desired_position);
    if (a.actual_position) {
      act.push_back(*a.actual_position);
    } else {
      have_actual = false;
    }
  }
  s.d_min_commanded = min_distance(cmd);
  s.clearance_commanded = min_clearance(cmd, field);
  if (have_actual && !act.empty()) {
    s.d_min_actual = min_distance(act);
    s.clearance_actual = min_clearance(act, field);
  }
  return s;
}

}  // namespace

std::vector<SeparationSample> monitor_separations(const ScenarioLog& log,
                                                  const SafetyMargins& margins) {
  validate(margins);
  std::vector<SeparationSample> out;
  out.reserve(log.steps.size());
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    out.push_back(measure(log.steps[k], log.field_at(k)));
  }
  return out;
}

std::vector<SeparationSample> monitor_separations(const ScenarioLog& log,
                                                  const SafetyMargins& margins,
                                                  const FlowField& field) {
  validate(margins);
  std::vector<SeparationSample> out;
  out.reserve(log.steps.size());
  for (const StepRecord& rec : log.steps) out.push_back(measure(rec, field));
  return out;
}

SeparationSummary summarize(std::span<const SeparationSample> samples,
                            const SafetyMargins& margins) {
  SeparationSummary sum;
  auto fold = [](std::optional<double>& acc, const std::optional<double>& v) {
    if (v) acc = acc ? std::min(*acc, *v) : *v;
  };
  for (const auto& s : samples) {
    fold(sum.min_d_commanded, s.d_min_commanded);
    fold(sum.min_d_actual, s.d_min_actual);
    fold(sum.min_clearance_commanded, s.clearance_commanded);
    fold(sum.min_clearance_actual, s.clearance_actual);
  }
  const double floor = margins.separation_floor() - kBoundaryTolerance;
  sum.separation_ok = !sum.min_d_commanded || *sum.min_d_commanded >= floor;
  const auto clearance = sum.min_clearance_actual ? sum.min_clearance_actual
                                                  : sum.min_clearance_commanded;
  sum.clearance_ok = !clearance || *clearance >= margins.epsilon - kBoundaryTolerance;
  return sum;
}

}  // namespace streamnav
