#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gaze/types.hpp"

namespace gaze {

struct SubjectTrack {
  std::string subject_id;
  std::vector<LandmarkFrame> frames;  // sorted by frame_index, no duplicates
};

// Landmark frames grouped by subject; subjects sorted by id so iteration
// order is stable across loads.
struct Dataset {
  std::vector<SubjectTrack> subjects;

  std::size_t total_frames() const;
  const SubjectTrack* find(std::string_view subject_id) const;

  // Labeled frame count per class under the scheme.
  std::vector<std::size_t> class_counts(const RegionScheme& scheme) const;
};

// Maximal sequence of same-label frames with consecutive frame indices
// (step 1) inside one subject track; [begin, end) index into the track.
struct LabelRun {
  std::size_t subject = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  GazeRegion label = GazeRegion::Road;

  std::size_t length() const { return end - begin; }
};

std::vector<LabelRun> label_runs(const Dataset& dataset);

// Line-delimited frame format:
//   subject_id frame_index label x0 y0 ... x55 y55
// label is 0-5 or '-' for unlabeled; a leading '# gazekit-frames v1' header
// carries the format version. Parse failures name the line; duplicate
// (subject, frame_index) pairs are errors.
Dataset load_frames(const std::filesystem::path& path);
void save_frames(const Dataset& dataset, const std::filesystem::path& path);

// Equalizes per-class frame counts at the minimum class count by drawing
// whole glance runs (seeded order), truncating the last run to hit the exact
// target. Frame order within each subject is preserved.
Dataset balanced_test_set(const Dataset& dataset, const RegionScheme& scheme,
                          std::uint64_t seed);

}  // namespace gaze
