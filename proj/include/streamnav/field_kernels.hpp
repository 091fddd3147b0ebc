#pragma once

// Batch flow-field kernels. Each kernel has a scalar reference version and an
// AVX2 version that performs the same operations in the same order, so the
// two produce bit-identical results. Dispatch picks AVX2 when the CPU has it
// unless STREAMNAV_KERNEL=scalar is set in the environment.

#include <span>
#include <string_view>

namespace streamnav::kernels {

enum class Isa { Scalar, Avx2 };

struct Obstacles {
  std::span<const double> cx;
  std::span<const double> cy;
  std::span<const double> a2;  ///< planned radius squared
};

/// Output arrays, each the length of the input point arrays.
struct FieldOut {
  std::span<double> phi;
  std::span<double> psi;
  std::span<double> dphi_dx;
  std::span<double> dpsi_dx;
};

/// phi, psi and the two independent Jacobian entries at every point.
/// Points within 1e-9 of a center yield NaN in all four outputs.
void eval_field_scalar(const Obstacles& obs, std::span<const double> x,
                       std::span<const double> y, const FieldOut& out);

/// |f'(z)|^2 = phi_x^2 + phi_y^2 at every point, NaN inside any open
/// planned-exclusion disk.
void stretch_sq_scalar(const Obstacles& obs, std::span<const double> x,
                       std::span<const double> y, std::span<double> out);

#if defined(__x86_64__) || defined(_M_X64)
#define STREAMNAV_HAVE_AVX2_KERNELS 1
void eval_field_avx2(const Obstacles& obs, std::span<const double> x,
                     std::span<const double> y, const FieldOut& out);
void stretch_sq_avx2(const Obstacles& obs, std::span<const double> x,
                     std::span<const double> y, std::span<double> out);
#else
#define STREAMNAV_HAVE_AVX2_KERNELS 0
#endif

bool cpu_has_avx2();

/// Best ISA for this CPU, honoring the STREAMNAV_KERNEL override.
Isa detect_isa();

/// ISA used by the dispatching entry points below. Initialized from
/// detect_isa(); set_active_isa falls back to Scalar if the CPU lacks AVX2.
Isa active_isa();
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa);

void eval_field(Isa isa, const Obstacles& obs, std::span<const double> x,
                std::span<const double> y, const FieldOut& out);
void stretch_sq(Isa isa, const Obstacles& obs, std::span<const double> x,
                std::span<const double> y, std::span<double> out);

inline void eval_field(const Obstacles& obs, std::span<const double> x, std::span<const double> y,
                       const FieldOut& out) {
  eval_field(active_isa(), obs, x, y, out);
}
inline void stretch_sq(const Obstacles& obs, std::span<const double> x, std::span<const double> y,
                       std::span<double> out) {
  stretch_sq(active_isa(), obs, x, y, out);
}

}  // namespace streamnav::kernels
