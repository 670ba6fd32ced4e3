#include "gaze/kernels.hpp"

namespace gaze::kernels {

#if defined(GAZEKIT_HAVE_AVX2_TU)
const Ops* avx2_ops_impl();
#endif

bool avx2_supported() {
#if defined(GAZEKIT_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Ops& active_ops() {
  static const Ops* selected = [] {
#if defined(GAZEKIT_HAVE_AVX2_TU)
    if (avx2_supported()) return avx2_ops_impl();
#endif
    return &scalar_ops();
  }();
  return *selected;
}

}  // namespace gaze::kernels
