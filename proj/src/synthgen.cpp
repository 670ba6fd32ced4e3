#include "gaze/synthgen.hpp"

#include <cmath>
#include <numbers>

#include "gaze/error.hpp"
#include "gaze/parallel.hpp"
#include "gaze/rng.hpp"

namespace gaze {

namespace {

struct TemplateEntry {
  int index;
  int mirror;  // -1: midline point
  Vec3 p;
};

// Left half and midline of the mean face; the right half is the exact
// x-negation of each mirrored entry, so reflection symmetry holds bitwise.
constexpr TemplateEntry kHalfFace[] = {
    // jawline
    {0, 16, {-0.58, 0.22, -0.26}},
    {1, 15, {-0.57, 0.05, -0.22}},
    {2, 14, {-0.54, -0.11, -0.17}},
    {3, 13, {-0.49, -0.27, -0.11}},
    {4, 12, {-0.42, -0.41, -0.05}},
    {5, 11, {-0.33, -0.53, 0.00}},
    {6, 10, {-0.23, -0.62, 0.04}},
    {7, 9, {-0.12, -0.69, 0.07}},
    {8, -1, {0.0, -0.72, 0.08}},
    // eyebrows (upper edge)
    {17, 26, {-0.46, 0.42, 0.02}},
    {18, 25, {-0.37, 0.48, 0.06}},
    {19, 24, {-0.27, 0.50, 0.08}},
    {20, 23, {-0.17, 0.48, 0.09}},
    {21, 22, {-0.08, 0.43, 0.09}},
    // nose bridge and tip
    {27, -1, {0.0, 0.34, 0.12}},
    {28, -1, {0.0, 0.22, 0.17}},
    {29, -1, {0.0, 0.10, 0.23}},
    {30, -1, {0.0, 0.00, 0.30}},
    // nose base
    {31, 35, {-0.11, -0.10, 0.14}},
    {32, 34, {-0.06, -0.12, 0.18}},
    {33, -1, {0.0, -0.13, 0.20}},
    // outer lips, upper arc
    {36, 42, {-0.26, -0.31, 0.03}},
    {37, 41, {-0.17, -0.26, 0.08}},
    {38, 40, {-0.07, -0.23, 0.11}},
    {39, -1, {0.0, -0.24, 0.12}},
    // outer lips, lower arc
    {43, 47, {-0.16, -0.40, 0.06}},
    {44, 46, {-0.07, -0.43, 0.08}},
    {45, -1, {0.0, -0.44, 0.09}},
    // inner lips
    {48, 52, {-0.20, -0.31, 0.05}},
    {49, 51, {-0.08, -0.29, 0.09}},
    {50, -1, {0.0, -0.30, 0.10}},
    {53, 55, {-0.08, -0.35, 0.08}},
    {54, -1, {0.0, -0.36, 0.09}},
};

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kImageCenterXPx = 400.0;
constexpr double kImageCenterYPx = 300.0;
constexpr double kSubjectPositionSigmaPx = 25.0;

Vec3 rotate_yaw_pitch(const Vec3& p, double yaw_rad, double pitch_rad) {
  // Yaw about +y, then pitch about +x, both right-handed.
  const double cy = std::cos(yaw_rad), sy = std::sin(yaw_rad);
  const double cp = std::cos(pitch_rad), sp = std::sin(pitch_rad);
  const Vec3 q{p.x * cy + p.z * sy, p.y, -p.x * sy + p.z * cy};
  return Vec3{q.x, q.y * cp - q.z * sp, q.y * sp + q.z * cp};
}

std::string subject_name(int index) {
  std::string name = "s000";
  name[3] = static_cast<char>('0' + index % 10);
  name[2] = static_cast<char>('0' + (index / 10) % 10);
  name[1] = static_cast<char>('0' + (index / 100) % 10);
  return name;
}

}  // namespace

void validate_config(const GenConfig& config) {
  if (config.n_subjects <= 0 || config.frames_per_glance <= 0 ||
      config.glances_per_region <= 0) {
    throw Error("gen config: counts must be positive");
  }
  if (config.region_pose[region_code(GazeRegion::Road)].yaw_deg != 0.0 ||
      config.region_pose[region_code(GazeRegion::Road)].pitch_deg != 0.0) {
    throw Error("gen config: road pose must be (0, 0)");
  }
  if (!(config.head_coupling_kappa >= 0.0 &&
        config.head_coupling_kappa <= 1.0)) {
    throw Error("gen config: kappa must be in [0, 1]");
  }
  if (!(config.subject_offset_sigma_deg >= 0.0) ||
      !std::isfinite(config.subject_offset_sigma_deg) ||
      !(config.noise_sigma_px >= 0.0) || !std::isfinite(config.noise_sigma_px)) {
    throw Error("gen config: sigmas must be finite and non-negative");
  }
  if (!(config.camera_scale_px > 0.0)) {
    throw Error("gen config: camera scale must be positive");
  }
}

std::array<Vec3, kNumLandmarks> canonical_head() {
  std::array<Vec3, kNumLandmarks> head{};
  for (const TemplateEntry& e : kHalfFace) {
    head[e.index] = e.p;
    if (e.mirror >= 0) head[e.mirror] = Vec3{-e.p.x, e.p.y, e.p.z};
  }
  double cy = 0.0, cz = 0.0;
  for (const Vec3& p : head) {
    cy += p.y;
    cz += p.z;
  }
  cy /= kNumLandmarks;
  cz /= kNumLandmarks;
  for (Vec3& p : head) {
    p.y -= cy;
    p.z -= cz;
  }
  return head;
}

int mirror_landmark(int index) {
  static const auto table = [] {
    std::array<int, kNumLandmarks> t{};
    for (const TemplateEntry& e : kHalfFace) {
      if (e.mirror < 0) {
        t[e.index] = e.index;
      } else {
        t[e.index] = e.mirror;
        t[e.mirror] = e.index;
      }
    }
    return t;
  }();
  return table[index];
}

Dataset generate(const GenConfig& config) {
  validate_config(config);
  const auto head = canonical_head();
  const int frames_per_subject =
      kNumRegions * config.glances_per_region * config.frames_per_glance;
  const double jitter_sigma =
      config.subject_offset_sigma_deg * kFrameJitterRatio;

  Dataset dataset;
  dataset.subjects.resize(config.n_subjects);

  parallel_for(config.n_subjects, [&](std::size_t s) {
    Rng rng(derive_seed(config.seed, 0x5B1EC7, s));
    const double offset_yaw = rng.normal(0.0, config.subject_offset_sigma_deg);
    const double offset_pitch =
        rng.normal(0.0, config.subject_offset_sigma_deg);
    const double tx = kImageCenterXPx + rng.normal(0.0, kSubjectPositionSigmaPx);
    const double ty = kImageCenterYPx + rng.normal(0.0, kSubjectPositionSigmaPx);

    SubjectTrack track;
    track.subject_id = subject_name(static_cast<int>(s));
    track.frames.reserve(frames_per_subject);

    std::uint64_t frame_index = 0;
    const int glances = kNumRegions * config.glances_per_region;
    for (int g = 0; g < glances; ++g) {
      const GazeRegion region = static_cast<GazeRegion>(g % kNumRegions);
      const PoseDeg& pose = config.region_pose[region_code(region)];
      const double glance_yaw =
          config.head_coupling_kappa * pose.yaw_deg + offset_yaw;
      const double glance_pitch =
          config.head_coupling_kappa * pose.pitch_deg + offset_pitch;
      for (int f = 0; f < config.frames_per_glance; ++f) {
        const double yaw = glance_yaw + rng.normal(0.0, jitter_sigma);
        const double pitch = glance_pitch + rng.normal(0.0, jitter_sigma);

        LandmarkFrame frame;
        frame.subject_id = track.subject_id;
        frame.frame_index = frame_index++;
        frame.label = region;
        for (int i = 0; i < kNumLandmarks; ++i) {
          const Vec3 r =
              rotate_yaw_pitch(head[i], yaw * kDegToRad, pitch * kDegToRad);
          frame.landmarks[i].x = tx + config.camera_scale_px * r.x +
                                 rng.normal(0.0, config.noise_sigma_px);
          frame.landmarks[i].y = ty - config.camera_scale_px * r.y +
                                 rng.normal(0.0, config.noise_sigma_px);
        }
        track.frames.push_back(std::move(frame));
      }
    }
    dataset.subjects[s] = std::move(track);
  });

  return dataset;
}

}  // namespace gaze
