#pragma once

#include <span>
#include <string>

#include "gaze/types.hpp"

namespace gaze {

// Default calibration window: 120 seconds at 30 fps.
constexpr int kCalibrationWindowFrames = 3600;

// A subject's average face bounding box over the calibration window; defines
// the subject-relative coordinate system.
struct NormalizationContext {
  std::string subject_id;
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.0;
  double height = 0.0;
  int window_frames = 0;  // frames actually averaged
};

// Averages the per-frame face boxes (given, or derived from the landmarks)
// over the first min(window, available) frames of the subject's stream.
// Frames whose box is degenerate are skipped. Throws when no usable frame
// exists or the mean box has non-positive size.
NormalizationContext compute_context(std::span<const LandmarkFrame> frames,
                                     int window = kCalibrationWindowFrames);

// x' = (x - center_x) / width, y' = (y - center_y) / height per landmark.
Shape normalize_frame(const LandmarkFrame& frame,
                      const NormalizationContext& ctx);

}  // namespace gaze
