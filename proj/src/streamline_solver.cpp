#include "streamnav/streamline_solver.hpp"

#include <cmath>
#include <sstream>

#include "streamnav/errors.hpp"

namespace streamnav {

namespace {

constexpr double kSingularDet = 1e-12;
constexpr double kInitialDamping = 1e-6;
constexpr int kDampingRetries = 3;
// Projected points land this far outside the circle so rounding never leaves
// them strictly inside.
constexpr double kProjectionSlack = 1e-12;

Vec2 newton_step(const Jacobian2x2& j, double e_phi, double e_psi) {
  double a = j.dphi_dx, b = j.dphi_dy, c = j.dpsi_dx, d = j.dpsi_dy;
  double det = a * d - b * c;
  double mu = kInitialDamping;
  for (int attempt = 0; std::abs(det) < kSingularDet; ++attempt) {
    if (attempt > kDampingRetries) {
      throw SingularJacobian("Jacobian stays singular after damping");
    }
    a = j.dphi_dx + mu;
    d = j.dpsi_dy + mu;
    det = a * d - b * c;
    mu *= 10.0;
  }
  return {(d * e_phi - b * e_psi) / det, (-c * e_phi + a * e_psi) / det};
}

// Escape noise scaled relative to the nearest obstacle.
Vec2 escape_noise(Vec2 r, const Obstacle& o, double sigma, NoiseSource& noise) {
  const Vec2 rel = r - o.center();
  const double len = norm(rel);
  const Vec2 away = len > 0.0 ? rel / len : Vec2{1.0, 0.0};
  const Vec2 tangent{away.y, -away.x};
  const double outward = std::abs(noise.normal(sigma));
  const double lateral = noise.normal(sigma);
  return outward * away + lateral * tangent;
}

// A center is a pole of the field; step off it along +x onto the circle.
void leave_center(Vec2& r, const FlowField& field) {
  for (const auto& o : field.obstacles()) {
    const Vec2 rel = r - o.center();
    if (rel.x * rel.x + rel.y * rel.y <= 1e-18) {
      r = o.center() + Vec2{o.planned_radius() + kProjectionSlack, 0.0};
    }
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("solver iterations must be >= 1");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  if (!(dt > 0.0)) throw InvalidArgument("solver dt must be > 0");
  if (!(saddle_det_threshold >= 0.0)) throw InvalidArgument("saddle threshold must be >= 0");
}

bool project_outside(Vec2& p, const FlowField& field) {
  bool moved = false;
  // Overlapping disks can push a point from one into another; a few sweeps settle it.
  for (int sweep = 0; sweep < 4; ++sweep) {
    bool changed = false;
    for (const auto& o : field.obstacles()) {
      const Vec2 rel = p - o.center();
      const double a = o.planned_radius();
      const double d2 = rel.x * rel.x + rel.y * rel.y;
      if (d2 < a * a) {
        const double len = std::sqrt(d2);
        const Vec2 dir = len > 0.0 ? rel / len : Vec2{1.0, 0.0};
        p = o.center() + (a + kProjectionSlack) * dir;
        changed = true;
      }
    }
    moved |= changed;
    if (!changed) break;
  }
  return moved;
}

SolveResult calc_xy(double phi_target, double psi_target, Vec2 guess, const FlowField& field,
                    const SolverConfig& cfg, NoiseSource& noise) {
  cfg.validate();
  if (!std::isfinite(phi_target) || !std::isfinite(psi_target)) {
    throw NonFinite("calc_xy target is not finite");
  }
  SolveResult out;
  Vec2 r = guess;
  for (int it = 0; it < cfg.iterations; ++it) {
    leave_center(r, field);
    const FieldSample s = field.sample(r);
    const Vec2 step = newton_step(s.jacobian, s.value.phi - phi_target, s.value.psi - psi_target);

    Vec2 kick{};
    if (const auto k = field.nearest(r)) {
      const Obstacle& o = field.obstacles()[*k];
      const bool on_or_inside = distance(r, o.center()) <= o.planned_radius();
      const bool saddle = std::abs(s.jacobian.determinant()) < cfg.saddle_det_threshold;
      if ((on_or_inside || saddle) && cfg.noise_sigma > 0.0) {
        kick = escape_noise(r, o, cfg.noise_sigma, noise);
        out.noise_was_injected = true;
      }
    }
    r = r - step + kick;
    if (!std::isfinite(r.x) || !std::isfinite(r.y)) {
      std::ostringstream os;
      os << "calc_xy diverged at iteration " << it << " for target (" << phi_target << ", "
         << psi_target << ")";
      throw NonFinite(os.str());
    }
  }
  out.projected = project_outside(r, field);
  leave_center(r, field);

  const FieldPoint f = field.sample(r).value;
  out.position = r;
  out.velocity = (r - guess) / cfg.dt;
  out.phi_residual = std::abs(f.phi - phi_target);
  out.psi_residual = std::abs(f.psi - psi_target);
  return out;
}

std::vector<SolveResult> invert_batch(std::span<const InversionTarget> targets,
                                      const FlowField& field, const SolverConfig& cfg,
                                      NoiseSource& noise) {
  std::vector<SolveResult> results;
  results.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    try {
      results.push_back(calc_xy(targets[i].phi, targets[i].psi, targets[i].guess, field, cfg, noise));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "agent index " << i << ": " << e.what();
      throw AgentSolveError(i, os.str());
    }
  }
  return results;
}

}  // namespace streamnav
