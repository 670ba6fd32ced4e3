#include "gaze/normalize.hpp"

#include <algorithm>

#include "gaze/error.hpp"
#include "gaze/kernels.hpp"

namespace gaze {

NormalizationContext compute_context(std::span<const LandmarkFrame> frames,
                                     int window) {
  if (window < 1) throw Error("compute_context: window must be >= 1");
  const std::size_t limit =
      std::min(frames.size(), static_cast<std::size_t>(window));

  double sum_cx = 0.0, sum_cy = 0.0, sum_w = 0.0, sum_h = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    const Box box = frames[i].bbox ? *frames[i].bbox
                                   : bbox_from_landmarks(frames[i].landmarks);
    if (!(box.width > 0.0 && box.height > 0.0)) continue;
    sum_cx += box.x_min + box.width / 2.0;
    sum_cy += box.y_min + box.height / 2.0;
    sum_w += box.width;
    sum_h += box.height;
    ++used;
  }
  if (used == 0) {
    throw Error("compute_context: no usable bounding box in the first " +
                std::to_string(limit) + " frames");
  }
  NormalizationContext ctx;
  ctx.subject_id = frames.empty() ? std::string() : frames[0].subject_id;
  ctx.center_x = sum_cx / used;
  ctx.center_y = sum_cy / used;
  ctx.width = sum_w / used;
  ctx.height = sum_h / used;
  ctx.window_frames = used;
  if (!(ctx.width > 0.0 && ctx.height > 0.0)) {
    throw Error("compute_context: degenerate mean box for subject " +
                ctx.subject_id);
  }
  return ctx;
}

Shape normalize_frame(const LandmarkFrame& frame,
                      const NormalizationContext& ctx) {
  Shape out;
  kernels::active_ops().normalize_points(&frame.landmarks[0].x, kNumLandmarks,
                                         ctx.center_x, ctx.center_y, ctx.width,
                                         ctx.height, &out[0].x);
  return out;
}

}  // namespace gaze
