#pragma once

#include <array>
#include <cstdint>

#include "gaze/dataset.hpp"
#include "gaze/types.hpp"

namespace gaze {

// Landmark group ranges within the 56-point numbering.
constexpr int kJawBegin = 0, kJawEnd = 17;
constexpr int kBrowBegin = 17, kBrowEnd = 27;
constexpr int kNoseBegin = 27, kNoseEnd = 36;
constexpr int kLipsBegin = 36, kLipsEnd = 56;
constexpr int kNoseTipIndex = 30;

struct PoseDeg {
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
};

// Parameters of the synthetic head-pose stream generator. Defaults are the
// desk-scale configuration used by the evaluation harness.
struct GenConfig {
  int n_subjects = 12;
  int frames_per_glance = 90;
  int glances_per_region = 4;
  // Mean head rotation per region, indexed by region code. Road must be
  // (0, 0): it is the frontal reference. Signs assume a left-hand-drive
  // cabin with the camera right of the driver.
  std::array<PoseDeg, kNumRegions> region_pose = {{
      {0.0, 0.0},     // road
      {-20.0, -15.0}, // center stack
      {0.0, -12.0},   // instrument cluster
      {15.0, 8.0},    // rearview mirror
      {35.0, 0.0},    // left
      {-35.0, -5.0},  // right
  }};
  // Fraction of a gaze shift executed by the head; the remainder is
  // unobserved eye movement. 0 leaves no head signal at all.
  double head_coupling_kappa = 0.6;
  double subject_offset_sigma_deg = 16.0;
  double noise_sigma_px = 3.0;
  double camera_scale_px = 220.0;
  std::uint64_t seed = 0;
};

void validate_config(const GenConfig& config);

// Per-frame head-pose jitter, as a fraction of subject_offset_sigma_deg.
// Within-glance wobble stays well below the between-subject spread.
constexpr double kFrameJitterRatio = 0.125;

// Bilaterally symmetric 56-point mean face in unitless model coordinates:
// x right, y up, z toward the camera; centroid at the origin; the nose tip
// carries the largest z.
std::array<Vec3, kNumLandmarks> canonical_head();

// Mirror partner of each landmark index under x -> -x.
int mirror_landmark(int index);

// Labeled synthetic dataset: per subject, glance regions cycle round-robin;
// each glance applies head rotation kappa * region_pose + a per-subject
// offset plus per-frame jitter, orthographically projects the rotated head,
// scales, translates to a subject-specific image position and adds Gaussian
// pixel noise. Pure function of the config: same config, same bytes.
Dataset generate(const GenConfig& config);

}  // namespace gaze
