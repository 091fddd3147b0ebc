// Built with -mavx2 (no FMA) so every lane rounds exactly like the scalar
// reference in field_term.hpp.

#include "streamnav/field_kernels.hpp"

#if STREAMNAV_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cstddef>

namespace streamnav::kernels {

namespace {

struct Acc4 {
  __m256d phi, psi, dphi_dx, dpsi_dx;
};

inline void add_term4(Acc4& acc, __m256d dx, __m256d dy, __m256d a2, __m256d& r2_out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d dx2 = _mm256_mul_pd(dx, dx);
  const __m256d dy2 = _mm256_mul_pd(dy, dy);
  const __m256d r2 = _mm256_add_pd(dx2, dy2);
  const __m256d inv = _mm256_div_pd(one, r2);
  const __m256d s = _mm256_mul_pd(a2, inv);
  acc.phi = _mm256_add_pd(acc.phi, _mm256_add_pd(dx, _mm256_mul_pd(dx, s)));
  acc.psi = _mm256_add_pd(acc.psi, _mm256_sub_pd(dy, _mm256_mul_pd(dy, s)));
  const __m256d u = _mm256_mul_pd(s, inv);
  const __m256d q = _mm256_mul_pd(u, _mm256_sub_pd(dx2, dy2));
  const __m256d w = _mm256_mul_pd(u, _mm256_mul_pd(_mm256_mul_pd(two, dx), dy));
  acc.dphi_dx = _mm256_add_pd(acc.dphi_dx, _mm256_sub_pd(one, q));
  acc.dpsi_dx = _mm256_add_pd(acc.dpsi_dx, w);
  r2_out = r2;
}

inline Acc4 zero_acc() {
  const __m256d z = _mm256_setzero_pd();
  return {z, z, z, z};
}

}  // namespace

void eval_field_avx2(const Obstacles& obs, std::span<const double> x,
                     std::span<const double> y, const FieldOut& out) {
  const std::size_t n = x.size();
  const std::size_t m = obs.cx.size();
  if (m == 0) {
    eval_field_scalar(obs, x, y, out);
    return;
  }
  const __m256d guard = _mm256_set1_pd(1e-18);
  const __m256d nan = _mm256_set1_pd(__builtin_nan(""));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d px = _mm256_loadu_pd(x.data() + i);
    const __m256d py = _mm256_loadu_pd(y.data() + i);
    Acc4 acc = zero_acc();
    __m256d singular = _mm256_setzero_pd();
    for (std::size_t k = 0; k < m; ++k) {
      const __m256d dx = _mm256_sub_pd(px, _mm256_set1_pd(obs.cx[k]));
      const __m256d dy = _mm256_sub_pd(py, _mm256_set1_pd(obs.cy[k]));
      __m256d r2;
      add_term4(acc, dx, dy, _mm256_set1_pd(obs.a2[k]), r2);
      singular = _mm256_or_pd(singular, _mm256_cmp_pd(r2, guard, _CMP_LE_OQ));
    }
    _mm256_storeu_pd(out.phi.data() + i, _mm256_blendv_pd(acc.phi, nan, singular));
    _mm256_storeu_pd(out.psi.data() + i, _mm256_blendv_pd(acc.psi, nan, singular));
    _mm256_storeu_pd(out.dphi_dx.data() + i, _mm256_blendv_pd(acc.dphi_dx, nan, singular));
    _mm256_storeu_pd(out.dpsi_dx.data() + i, _mm256_blendv_pd(acc.dpsi_dx, nan, singular));
  }
  if (i < n) {
    const std::size_t rest = n - i;
    eval_field_scalar(obs, x.subspan(i), y.subspan(i),
                      {out.phi.subspan(i, rest), out.psi.subspan(i, rest),
                       out.dphi_dx.subspan(i, rest), out.dpsi_dx.subspan(i, rest)});
  }
}

void stretch_sq_avx2(const Obstacles& obs, std::span<const double> x,
                     std::span<const double> y, std::span<double> out) {
  const std::size_t n = x.size();
  const std::size_t m = obs.cx.size();
  if (m == 0) {
    stretch_sq_scalar(obs, x, y, out);
    return;
  }
  const __m256d guard = _mm256_set1_pd(1e-18);
  const __m256d nan = _mm256_set1_pd(__builtin_nan(""));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d px = _mm256_loadu_pd(x.data() + i);
    const __m256d py = _mm256_loadu_pd(y.data() + i);
    Acc4 acc = zero_acc();
    __m256d masked = _mm256_setzero_pd();
    for (std::size_t k = 0; k < m; ++k) {
      const __m256d a2 = _mm256_set1_pd(obs.a2[k]);
      const __m256d dx = _mm256_sub_pd(px, _mm256_set1_pd(obs.cx[k]));
      const __m256d dy = _mm256_sub_pd(py, _mm256_set1_pd(obs.cy[k]));
      __m256d r2;
      add_term4(acc, dx, dy, a2, r2);
      masked = _mm256_or_pd(masked, _mm256_cmp_pd(r2, a2, _CMP_LT_OQ));
      masked = _mm256_or_pd(masked, _mm256_cmp_pd(r2, guard, _CMP_LE_OQ));
    }
    const __m256d s2 = _mm256_add_pd(_mm256_mul_pd(acc.dphi_dx, acc.dphi_dx),
                                     _mm256_mul_pd(acc.dpsi_dx, acc.dpsi_dx));
    _mm256_storeu_pd(out.data() + i, _mm256_blendv_pd(s2, nan, masked));
  }
  if (i < n) {
    stretch_sq_scalar(obs, x.subspan(i), y.subspan(i), out.subspan(i));
  }
}

}  // namespace streamnav::kernels

#endif
