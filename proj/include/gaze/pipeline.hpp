#pragma once

#include <cstdint>
#include <vector>

#include "gaze/dataset.hpp"
#include "gaze/eval.hpp"
#include "gaze/features.hpp"
#include "gaze/forest.hpp"
#include "gaze/model_io.hpp"
#include "gaze/types.hpp"

namespace gaze {

struct TrainedPipeline {
  FeaturePlan plan;
  Forest forest;
};

// Feature-selection, plan construction and forest training over normalized
// labeled shapes: RFE on a per-class strided subsample, plan on the mean
// shape, forest on the full feature matrix.
TrainedPipeline train_pipeline(const std::vector<Shape>& shapes,
                               const std::vector<int>& labels, int n_classes,
                               const EvalParams& params, std::uint64_t rfe_seed,
                               std::uint64_t forest_seed);

// Appends one subject's normalized labeled frames to a training pool. A
// nonzero cap keeps a strided subset per class across the subject's stream,
// so pooled classes keep every glance region represented.
void collect_training_frames(const SubjectTrack& track,
                             const NormalizationContext& ctx,
                             const RegionScheme& scheme, std::size_t cap,
                             std::vector<Shape>& shapes,
                             std::vector<int>& labels);

// Full-dataset model: per-subject contexts plus one pipeline trained on all
// labeled frames (optionally capped per subject and class).
Model train_model(const Dataset& dataset, const RegionScheme& scheme,
                  const EvalParams& params, std::uint64_t seed);

}  // namespace gaze
