#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "gaze/features.hpp"
#include "gaze/forest.hpp"
#include "gaze/normalize.hpp"
#include "gaze/types.hpp"

namespace gaze {

// A trained pipeline: class scheme, feature plan, per-subject normalization
// contexts and the forest. load(save(m)) yields bit-identical probability
// vectors on any feature vector.
struct Model {
  RegionScheme scheme;
  int context_window = kCalibrationWindowFrames;
  FeaturePlan plan;
  std::vector<NormalizationContext> contexts;  // sorted by subject_id
  Forest forest;

  const NormalizationContext* find_context(std::string_view subject_id) const;
};

// Single-file binary container, versioned and checksummed; truncated or
// corrupted files fail to load without producing a partial model.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace gaze
