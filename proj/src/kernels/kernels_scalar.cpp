#include "gaze/kernels.hpp"

namespace gaze::kernels {
namespace {

void normalize_points_scalar(const double* xy, std::size_t n_points,
                             double center_x, double center_y, double width,
                             double height, double* out) {
  for (std::size_t i = 0; i < n_points; ++i) {
    out[2 * i] = (xy[2 * i] - center_x) / width;
    out[2 * i + 1] = (xy[2 * i + 1] - center_y) / height;
  }
}

void minmax_xy_scalar(const double* xy, std::size_t n_points, double* min_x,
                      double* min_y, double* max_x, double* max_y) {
  double mnx = xy[0], mny = xy[1], mxx = xy[0], mxy = xy[1];
  for (std::size_t i = 1; i < n_points; ++i) {
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

void vec_accumulate_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void vec_scale_scalar(double* x, std::size_t n, double s) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

void leaf_accumulate_scalar(double* acc, const std::uint32_t* counts,
                            std::size_t n_classes, double total) {
  for (std::size_t c = 0; c < n_classes; ++c) {
    acc[c] += static_cast<double>(counts[c]) / total;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar",           normalize_points_scalar, minmax_xy_scalar,
      vec_accumulate_scalar, vec_scale_scalar,     leaf_accumulate_scalar,
  };
  return ops;
}

}  // namespace gaze::kernels
