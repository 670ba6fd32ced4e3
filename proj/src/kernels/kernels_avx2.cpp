// AVX2 kernel variants. This translation unit is compiled with -mavx2 on
// x86-64 only; callers reach it through active_ops() after the runtime
// cpuid check. Lane layout mirrors the interleaved (x, y) storage so each
// lane performs exactly the scalar op sequence, keeping outputs bit-identical
// to the scalar reference.

#if defined(__AVX2__)

#include <immintrin.h>

#include "gaze/kernels.hpp"

namespace gaze::kernels {
namespace {

void normalize_points_avx2(const double* xy, std::size_t n_points,
                           double center_x, double center_y, double width,
                           double height, double* out) {
  const __m256d center = _mm256_setr_pd(center_x, center_y, center_x, center_y);
  const __m256d size = _mm256_setr_pd(width, height, width, height);
  std::size_t i = 0;
  const std::size_t pairs = n_points / 2;  // two (x, y) points per vector
  for (; i < pairs; ++i) {
    const __m256d p = _mm256_loadu_pd(xy + 4 * i);
    _mm256_storeu_pd(out + 4 * i, _mm256_div_pd(_mm256_sub_pd(p, center), size));
  }
  if (n_points & 1) {
    const std::size_t k = 2 * (n_points - 1);
    out[k] = (xy[k] - center_x) / width;
    out[k + 1] = (xy[k + 1] - center_y) / height;
  }
}

void minmax_xy_avx2(const double* xy, std::size_t n_points, double* min_x,
                    double* min_y, double* max_x, double* max_y) {
  std::size_t i = 0;
  double mnx = xy[0], mny = xy[1], mxx = xy[0], mxy = xy[1];
  if (n_points >= 2) {
    __m256d mn = _mm256_loadu_pd(xy);
    __m256d mx = mn;
    const std::size_t pairs = n_points / 2;
    for (i = 1; i < pairs; ++i) {
      const __m256d p = _mm256_loadu_pd(xy + 4 * i);
      mn = _mm256_min_pd(mn, p);
      mx = _mm256_max_pd(mx, p);
    }
    alignas(32) double lo[4], hi[4];
    _mm256_store_pd(lo, mn);
    _mm256_store_pd(hi, mx);
    mnx = lo[0] < lo[2] ? lo[0] : lo[2];
    mny = lo[1] < lo[3] ? lo[1] : lo[3];
    mxx = hi[0] > hi[2] ? hi[0] : hi[2];
    mxy = hi[1] > hi[3] ? hi[1] : hi[3];
    i = 2 * pairs;
  } else {
    i = 1;
  }
  for (; i < n_points; ++i) {
    const double x = xy[2 * i];
    const double y = xy[2 * i + 1];
    if (x < mnx) mnx = x;
    if (y < mny) mny = y;
    if (x > mxx) mxx = x;
    if (y > mxy) mxy = y;
  }
  *min_x = mnx;
  *min_y = mny;
  *max_x = mxx;
  *max_y = mxy;
}

void vec_accumulate_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void vec_scale_avx2(double* x, std::size_t n, double s) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), sv));
  }
  for (; i < n; ++i) x[i] *= s;
}

void leaf_accumulate_avx2(double* acc, const std::uint32_t* counts,
                          std::size_t n_classes, double total) {
  const __m256d tv = _mm256_set1_pd(total);
  std::size_t c = 0;
  for (; c + 4 <= n_classes; c += 4) {
    const __m128i ci =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(counts + c));
    const __m256d frac = _mm256_div_pd(_mm256_cvtepi32_pd(ci), tv);
    _mm256_storeu_pd(acc + c, _mm256_add_pd(_mm256_loadu_pd(acc + c), frac));
  }
  for (; c < n_classes; ++c) {
    acc[c] += static_cast<double>(counts[c]) / total;
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{
      "avx2",           normalize_points_avx2, minmax_xy_avx2,
      vec_accumulate_avx2, vec_scale_avx2,     leaf_accumulate_avx2,
  };
  return &ops;
}

}  // namespace gaze::kernels

#endif  // __AVX2__
