#include "gaze/features.hpp"

#include <algorithm>
#include <cstring>
#include <numbers>
#include <set>

#include "gaze/error.hpp"
#include "gaze/forest.hpp"
#include "gaze/kernels.hpp"
#include "gaze/rng.hpp"

namespace gaze {

std::vector<std::int32_t> select_landmarks(std::span<const Shape> frames,
                                           std::span<const int> labels,
                                           int n_classes, int k,
                                           const RfeParams& rfe) {
  if (frames.empty()) throw Error("select_landmarks: empty training set");
  if (frames.size() != labels.size()) {
    throw Error("select_landmarks: frames/labels size mismatch");
  }
  if (k < 3 || k > kNumLandmarks) {
    throw Error("select_landmarks: k must be in [3, 56]");
  }
  {
    const std::set<int> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2) {
      throw Error("select_landmarks: need at least 2 classes present");
    }
  }

  std::vector<std::int32_t> active(kNumLandmarks);
  for (int i = 0; i < kNumLandmarks; ++i) active[i] = i;

  std::uint64_t round = 0;
  while (static_cast<int>(active.size()) > k) {
    Matrix X(frames.size(), 2 * active.size());
    for (std::size_t r = 0; r < frames.size(); ++r) {
      double* row = X.row(r);
      for (std::size_t i = 0; i < active.size(); ++i) {
        row[2 * i] = frames[r][active[i]].x;
        row[2 * i + 1] = frames[r][active[i]].y;
      }
    }
    ForestParams params;
    params.n_trees = rfe.forest_size;
    params.max_depth = rfe.max_depth;
    params.seed = derive_seed(rfe.seed, 0x8FE, round);
    const Forest forest = train_forest(X, labels, n_classes, params);
    const auto importances = forest.feature_importances();

    std::size_t drop = 0;
    double drop_score = importances[0] + importances[1];
    for (std::size_t i = 1; i < active.size(); ++i) {
      const double score = importances[2 * i] + importances[2 * i + 1];
      // Ties remove the highest landmark index; `active` is ascending.
      if (score < drop_score || (score == drop_score && active[i] > active[drop])) {
        drop = i;
        drop_score = score;
      }
    }
    active.erase(active.begin() + drop);
    ++round;
  }
  return active;
}

Shape mean_shape(std::span<const Shape> frames) {
  if (frames.empty()) throw Error("mean_shape: no frames");
  const auto& ops = kernels::active_ops();
  std::array<double, kPositionalFeatures> acc{};
  for (const Shape& s : frames) {
    ops.vec_accumulate(acc.data(), &s[0].x, kPositionalFeatures);
  }
  ops.vec_scale(acc.data(), kPositionalFeatures,
                1.0 / static_cast<double>(frames.size()));
  Shape mean;
  std::memcpy(&mean[0].x, acc.data(), sizeof(acc));
  return mean;
}

FeaturePlan build_plan(std::span<const std::int32_t> selected,
                       const Shape& reference) {
  if (selected.size() != kSelectedLandmarks) {
    throw Error("build_plan: expected " + std::to_string(kSelectedLandmarks) +
                " selected landmarks");
  }
  FeaturePlan plan;
  plan.selected.assign(selected.begin(), selected.end());
  std::sort(plan.selected.begin(), plan.selected.end());
  for (std::size_t i = 0; i < plan.selected.size(); ++i) {
    if (plan.selected[i] < 0 || plan.selected[i] >= kNumLandmarks ||
        (i > 0 && plan.selected[i] == plan.selected[i - 1])) {
      throw Error("build_plan: selected indices must be distinct in [0, 56)");
    }
  }
  std::vector<Vec2> points(plan.selected.size());
  for (std::size_t i = 0; i < plan.selected.size(); ++i) {
    points[i] = reference[plan.selected[i]];
  }
  plan.triangulation = delaunay(points);
  return plan;
}

void extract(const Shape& normalized, const FeaturePlan& plan, double* out) {
  std::memcpy(out, &normalized[0].x, kPositionalFeatures * sizeof(double));
  double* angles = out + kPositionalFeatures;
  for (const Triangle& t : plan.triangulation.triangles) {
    const Vec2& a = normalized[plan.selected[t.a]];
    const Vec2& b = normalized[plan.selected[t.b]];
    const Vec2& c = normalized[plan.selected[t.c]];
    std::array<double, 3> abc;
    if (try_triangle_angles(a, b, c, abc)) {
      angles[0] = abc[0];
      angles[1] = abc[1];
      angles[2] = abc[2];
    } else {
      angles[0] = std::numbers::pi;
      angles[1] = 0.0;
      angles[2] = 0.0;
    }
    angles += 3;
  }
}

std::vector<double> extract_vector(const Shape& normalized,
                                   const FeaturePlan& plan) {
  std::vector<double> out(plan.feature_len());
  extract(normalized, plan, out.data());
  return out;
}

}  // namespace gaze
