#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "streamnav/flow_field.hpp"
#include "streamnav/geometry.hpp"
#include "streamnav/noise.hpp"

namespace streamnav {

struct SolverConfig {
  int iterations = 20;         ///< Newton updates per call, always run in full
  double noise_sigma = 0.001;  ///< meters
  double dt = 0.01;            ///< seconds, for the first-order velocity
  std::uint64_t rng_seed = 0;
  /// |det J| below which an iterate counts as sitting on a saddle and
  /// receives escape noise even outside the disk.
  double saddle_det_threshold = 1e-6;

  /// Throws InvalidArgument on iterations < 1, sigma < 0 or dt <= 0.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct SolveResult {
  Vec2 position;
  Vec2 velocity;
  double phi_residual = 0.0;  ///< |phi(position) - phi_target|
  double psi_residual = 0.0;
  bool noise_was_injected = false;
  bool projected = false;  ///< final iterate was pulled back onto an a_p circle
};

/// Finds r with (phi(r), psi(r)) = (phi_target, psi_target) starting at guess.
///
/// Runs exactly cfg.iterations updates r <- r - J^-1 e + r_noise. Escape noise
/// (a half-normal push away from the nearest center plus a normal tangential
/// component) is drawn from `noise` whenever the iterate is on or inside that
/// obstacle's planned circle, or the Jacobian is near singular. A near-singular
/// Jacobian is damped as J + mu*I. The returned position is never inside a
/// planned-exclusion disk, and velocity = (position - guess) / dt.
///
/// Throws SingularJacobian if damping cannot regularize J, NonFinite if the
/// iterate leaves the finite reals.
SolveResult calc_xy(double phi_target, double psi_target, Vec2 guess, const FlowField& field,
                    const SolverConfig& cfg, NoiseSource& noise);

struct InversionTarget {
  double phi = 0.0;
  double psi = 0.0;
  Vec2 guess;
};

/// calc_xy per element, in order, sharing one noise stream. A failure is
/// rethrown as AgentSolveError carrying the element index.
std::vector<SolveResult> invert_batch(std::span<const InversionTarget> targets,
                                      const FlowField& field, const SolverConfig& cfg,
                                      NoiseSource& noise);

/// Moves p radially onto the planned circle of every disk that contains it.
/// Returns true if p was moved.
bool project_outside(Vec2& p, const FlowField& field);

}  // namespace streamnav
