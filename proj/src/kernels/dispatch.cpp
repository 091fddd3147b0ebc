#include <atomic>
#include <cstdlib>
#include <string_view>

#include "streamnav/field_kernels.hpp"

namespace streamnav::kernels {

bool cpu_has_avx2() {
#if STREAMNAV_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect_isa() {
  if (const char* env = std::getenv("STREAMNAV_KERNEL")) {
    if (std::string_view(env) == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

namespace {
std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detect_isa()};
  return slot;
}
}  // namespace

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && !cpu_has_avx2()) isa = Isa::Scalar;
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

void eval_field(Isa isa, const Obstacles& obs, std::span<const double> x,
                std::span<const double> y, const FieldOut& out) {
#if STREAMNAV_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2 && cpu_has_avx2()) {
    eval_field_avx2(obs, x, y, out);
    return;
  }
#endif
  (void)isa;
  eval_field_scalar(obs, x, y, out);
}

void stretch_sq(Isa isa, const Obstacles& obs, std::span<const double> x,
                std::span<const double> y, std::span<double> out) {
#if STREAMNAV_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2 && cpu_has_avx2()) {
    stretch_sq_avx2(obs, x, y, out);
    return;
  }
#endif
  (void)isa;
  stretch_sq_scalar(obs, x, y, out);
}

}  // namespace streamnav::kernels
