#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/error.hpp"

namespace gaze {

constexpr int kNumLandmarks = 56;
constexpr int kNumRegions = 6;
constexpr int kPositionalFeatures = 2 * kNumLandmarks;  // 112
constexpr double kFps = 30.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// 56 landmark positions of one face observation. Index order follows the
// 68-point iBUG 300-W numbering with the 12 eye-contour points (68-point
// indices 36-47) removed: 0-16 jawline, 17-26 eyebrows, 27-35 nose,
// 36-55 outer and inner lips.
using Shape = std::array<Vec2, kNumLandmarks>;

// In-cabin gaze regions. The integer encoding is the serialization and
// confusion-matrix index and must never change.
enum class GazeRegion : int {
  Road = 0,
  CenterStack = 1,
  InstrumentCluster = 2,
  RearviewMirror = 3,
  Left = 4,
  Right = 5,
};

std::string_view region_name(GazeRegion r);
GazeRegion region_from_code(int code);           // throws on code outside 0-5
std::optional<GazeRegion> region_from_name(std::string_view name);

constexpr int region_code(GazeRegion r) { return static_cast<int>(r); }

// Class partition used by training and evaluation: either the six regions
// as-is, or the binary driving-related vs center-stack problem.
enum class SchemeMode { SixClass, TwoClass };

struct RegionScheme {
  SchemeMode mode = SchemeMode::SixClass;

  int n_classes() const { return mode == SchemeMode::SixClass ? 6 : 2; }

  int class_of(GazeRegion r) const {
    if (mode == SchemeMode::SixClass) return region_code(r);
    return r == GazeRegion::CenterStack ? 1 : 0;
  }

  std::string class_name(int cls) const;

  static RegionScheme six() { return {SchemeMode::SixClass}; }
  static RegionScheme two() { return {SchemeMode::TwoClass}; }
};

// Axis-aligned box in pixels.
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double width = 0.0;
  double height = 0.0;
};

// One timestamped 56-point landmark observation.
struct LandmarkFrame {
  std::string subject_id;
  std::uint64_t frame_index = 0;
  std::optional<double> timestamp_s;  // explicit timestamp overrides 30 fps
  Shape landmarks{};
  std::optional<Box> bbox;
  std::optional<GazeRegion> label;

  double time_s() const {
    return timestamp_s ? *timestamp_s
                       : static_cast<double>(frame_index) / kFps;
  }
};

void validate_frame(const LandmarkFrame& frame);  // throws Error on violation

// Per-class probabilities; length is the class count of the active scheme.
using ProbVector = std::vector<double>;

// Entries in [0,1] summing to 1 within 1e-9.
bool probs_valid(const ProbVector& probs);

// Tight axis-aligned bounding box of the landmarks. A degenerate (zero-area)
// box is returned as-is; consumers decide what to do with it.
Box bbox_from_landmarks(const Shape& landmarks);

}  // namespace gaze
