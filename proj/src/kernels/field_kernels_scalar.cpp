#include <cstddef>
#include <limits>

#include "field_term.hpp"
#include "streamnav/field_kernels.hpp"

namespace streamnav::kernels {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void eval_field_scalar(const Obstacles& obs, std::span<const double> x,
                       std::span<const double> y, const FieldOut& out) {
  const std::size_t n = x.size();
  const std::size_t m = obs.cx.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m == 0) {
      out.phi[i] = x[i];
      out.psi[i] = y[i];
      out.dphi_dx[i] = 1.0;
      out.dpsi_dx[i] = 0.0;
      continue;
    }
    detail::Accum acc;
    bool singular = false;
    for (std::size_t k = 0; k < m; ++k) {
      const double dx = x[i] - obs.cx[k];
      const double dy = y[i] - obs.cy[k];
      singular |= (dx * dx + dy * dy) <= detail::kGuardSq;
      detail::add_term(acc, dx, dy, obs.a2[k]);
    }
    out.phi[i] = singular ? kNaN : acc.phi;
    out.psi[i] = singular ? kNaN : acc.psi;
    out.dphi_dx[i] = singular ? kNaN : acc.dphi_dx;
    out.dpsi_dx[i] = singular ? kNaN : acc.dpsi_dx;
  }
}

void stretch_sq_scalar(const Obstacles& obs, std::span<const double> x,
                       std::span<const double> y, std::span<double> out) {
  const std::size_t n = x.size();
  const std::size_t m = obs.cx.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m == 0) {
      out[i] = 1.0;
      continue;
    }
    detail::Accum acc;
    bool masked = false;
    for (std::size_t k = 0; k < m; ++k) {
      const double dx = x[i] - obs.cx[k];
      const double dy = y[i] - obs.cy[k];
      const double r2 = dx * dx + dy * dy;
      masked |= r2 < obs.a2[k] || r2 <= detail::kGuardSq;
      detail::add_term(acc, dx, dy, obs.a2[k]);
    }
    out[i] = masked ? kNaN : acc.dphi_dx * acc.dphi_dx + acc.dpsi_dx * acc.dpsi_dx;
  }
}

}  // namespace streamnav::kernels
