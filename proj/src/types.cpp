#include "gaze/types.hpp"

#include <cmath>

#include "gaze/kernels.hpp"

namespace gaze {

namespace {
constexpr std::string_view kRegionNames[kNumRegions] = {
    "road",   "center-stack", "instrument-cluster",
    "rearview-mirror", "left", "right",
};
}  // namespace

std::string_view region_name(GazeRegion r) {
  return kRegionNames[region_code(r)];
}

GazeRegion region_from_code(int code) {
  if (code < 0 || code >= kNumRegions) {
    throw Error("gaze region code out of range: " + std::to_string(code));
  }
  return static_cast<GazeRegion>(code);
}

std::optional<GazeRegion> region_from_name(std::string_view name) {
  for (int i = 0; i < kNumRegions; ++i) {
    if (kRegionNames[i] == name) return static_cast<GazeRegion>(i);
  }
  return std::nullopt;
}

std::string RegionScheme::class_name(int cls) const {
  if (mode == SchemeMode::SixClass) {
    return std::string(region_name(region_from_code(cls)));
  }
  return cls == 0 ? "driving-related" : "center-stack";
}

void validate_frame(const LandmarkFrame& frame) {
  for (const Vec2& p : frame.landmarks) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error("frame " + frame.subject_id + ":" +
                  std::to_string(frame.frame_index) +
                  " has a non-finite landmark");
    }
  }
  if (frame.bbox && (frame.bbox->width <= 0.0 || frame.bbox->height <= 0.0)) {
    throw Error("frame " + frame.subject_id + ":" +
                std::to_string(frame.frame_index) +
                " has a non-positive bounding box");
  }
}

bool probs_valid(const ProbVector& probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
    sum += p;
  }
  return std::fabs(sum - 1.0) <= 1e-9;
}

Box bbox_from_landmarks(const Shape& landmarks) {
  double mnx, mny, mxx, mxy;
  kernels::active_ops().minmax_xy(&landmarks[0].x, landmarks.size(), &mnx,
                                  &mny, &mxx, &mxy);
  return Box{mnx, mny, mxx - mnx, mxy - mny};
}

}  // namespace gaze
