#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaze/geometry.hpp"
#include "gaze/matrix.hpp"
#include "gaze/types.hpp"

namespace gaze {

constexpr int kSelectedLandmarks = 19;

// The selected landmarks and the fixed triangulation over them. One plan is
// built per trained model and reused for every frame, so the feature length
// never varies; per-frame triangles are generally not Delaunay anymore.
struct FeaturePlan {
  std::vector<std::int32_t> selected;  // sorted, exactly kSelectedLandmarks
  Triangulation triangulation;         // indices refer into `selected`

  int feature_len() const {
    return kPositionalFeatures +
           3 * static_cast<int>(triangulation.triangles.size());
  }

  friend bool operator==(const FeaturePlan&, const FeaturePlan&) = default;
};

struct RfeParams {
  int forest_size = 100;
  int max_depth = 30;
  std::uint64_t seed = 0;
};

// Recursive feature elimination over landmarks: each round trains a forest
// on the positional features of the still-active landmarks, scores landmark
// i as importance(x_i) + importance(y_i) and drops the lowest-scoring one
// (ties drop the highest index) until k remain. Returns sorted indices.
std::vector<std::int32_t> select_landmarks(std::span<const Shape> frames,
                                           std::span<const int> labels,
                                           int n_classes, int k,
                                           const RfeParams& rfe);

// Per-coordinate arithmetic mean of normalized shapes.
Shape mean_shape(std::span<const Shape> frames);

// Triangulates the selected points of the reference shape once; the plan is
// immutable afterwards.
FeaturePlan build_plan(std::span<const std::int32_t> selected,
                       const Shape& reference);

// Feature vector layout: [x0, y0, ..., x55, y55] in normalized coordinates,
// then for each plan triangle the three interior angles in vertex-index
// order. A triangle degenerate in this frame contributes (pi, 0, 0).
void extract(const Shape& normalized, const FeaturePlan& plan, double* out);

std::vector<double> extract_vector(const Shape& normalized,
                                   const FeaturePlan& plan);

}  // namespace gaze
