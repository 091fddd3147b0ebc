#pragma once

// Per-obstacle contribution shared by the scalar point evaluator and the
// scalar batch kernel. The AVX2 kernel mirrors this operation order exactly.
//
//   f(z) = sum (z - z_f) + a^2 / (z - z_f)
//   phi  = dx + a^2 dx / r^2          psi  = dy - a^2 dy / r^2
//   f'   = 1 - a^2 (dx^2 - dy^2) / r^4  +  i * 2 a^2 dx dy / r^4
//   phi_x = Re f' = psi_y,  psi_x = Im f' = -phi_y

namespace streamnav::kernels::detail {

struct Accum {
  double phi = 0.0;
  double psi = 0.0;
  double dphi_dx = 0.0;
  double dpsi_dx = 0.0;
};

inline void add_term(Accum& acc, double dx, double dy, double a2) {
  const double r2 = dx * dx + dy * dy;
  const double inv = 1.0 / r2;
  const double s = a2 * inv;
  acc.phi = acc.phi + (dx + dx * s);
  acc.psi = acc.psi + (dy - dy * s);
  const double u = s * inv;
  const double q = u * (dx * dx - dy * dy);
  const double w = u * ((2.0 * dx) * dy);
  acc.dphi_dx = acc.dphi_dx + (1.0 - q);
  acc.dpsi_dx = acc.dpsi_dx + w;
}

inline constexpr double kGuardSq = 1e-18;

}  // namespace streamnav::kernels::detail
