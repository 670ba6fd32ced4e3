#include <cmath>

#include <doctest.h>

#include "gaze/error.hpp"
#include "gaze/normalize.hpp"
#include "gaze/synthgen.hpp"

using namespace gaze;

namespace {

LandmarkFrame frame_with_box(std::uint64_t index, const Box& box) {
  LandmarkFrame f;
  f.subject_id = "s1";
  f.frame_index = index;
  f.bbox = box;
  // Landmarks spread inside the box so the derived box would differ.
  for (int i = 0; i < kNumLandmarks; ++i) {
    f.landmarks[i] = Vec2{box.x_min + box.width * (i + 1) / 60.0,
                          box.y_min + box.height * (i + 1) / 60.0};
  }
  return f;
}

}  // namespace

TEST_CASE("constant boxes average to themselves; center is min + size/2") {
  std::vector<LandmarkFrame> frames;
  for (int i = 0; i < 10; ++i) {
    frames.push_back(frame_with_box(i, Box{100, 100, 200, 240}));
  }
  const NormalizationContext ctx = compute_context(frames);
  CHECK(ctx.center_x == doctest::Approx(200.0));
  CHECK(ctx.center_y == doctest::Approx(220.0));
  CHECK(ctx.width == doctest::Approx(200.0));
  CHECK(ctx.height == doctest::Approx(240.0));
  CHECK(ctx.window_frames == 10);
  CHECK(ctx.subject_id == "s1");
}

TEST_CASE("mean box is the arithmetic mean of per-frame boxes") {
  std::vector<LandmarkFrame> frames;
  frames.push_back(frame_with_box(0, Box{0, 0, 100, 50}));
  frames.push_back(frame_with_box(1, Box{0, 0, 300, 150}));
  const NormalizationContext ctx = compute_context(frames);
  CHECK(ctx.width == doctest::Approx(200.0));
  CHECK(ctx.height == doctest::Approx(100.0));
}

TEST_CASE("window caps the frames used and later frames are ignored") {
  std::vector<LandmarkFrame> frames;
  for (int i = 0; i < 5000; ++i) {
    const double bump = i < 3600 ? 0.0 : 1000.0;
    frames.push_back(frame_with_box(i, Box{0, 0, 100.0 + bump, 100.0 + bump}));
  }
  const NormalizationContext ctx = compute_context(frames);
  CHECK(ctx.window_frames == 3600);
  CHECK(ctx.width == doctest::Approx(100.0));  // frames past 3600 ignored

  // Independence of frames beyond the window: truncating gives the same.
  frames.resize(3600);
  const NormalizationContext truncated = compute_context(frames);
  CHECK(ctx.center_x == truncated.center_x);
  CHECK(ctx.width == truncated.width);
  CHECK(ctx.height == truncated.height);
}

TEST_CASE("degenerate boxes are skipped; zero usable frames is an error") {
  LandmarkFrame degenerate;
  degenerate.subject_id = "s1";
  for (auto& p : degenerate.landmarks) p = Vec2{5, 5};

  std::vector<LandmarkFrame> frames = {degenerate};
  CHECK_THROWS_AS(compute_context(frames), Error);

  frames.push_back(frame_with_box(1, Box{0, 0, 10, 10}));
  const NormalizationContext ctx = compute_context(frames);
  CHECK(ctx.window_frames == 1);
}

TEST_CASE("normalize_frame maps center to origin and spans to units") {
  NormalizationContext ctx;
  ctx.center_x = 50;
  ctx.center_y = 80;
  ctx.width = 20;
  ctx.height = 40;
  LandmarkFrame f;
  f.landmarks[0] = Vec2{50, 80};
  f.landmarks[1] = Vec2{70, 80};  // center_x + width
  f.landmarks[2] = Vec2{50, 120};
  const Shape norm = normalize_frame(f, ctx);
  CHECK(norm[0].x == 0.0);
  CHECK(norm[0].y == 0.0);
  CHECK(norm[1].x == 1.0);
  CHECK(norm[1].y == 0.0);
  CHECK(norm[2].y == 1.0);
}

TEST_CASE("similarity invariance through the full context pipeline") {
  GenConfig c;
  c.n_subjects = 1;
  c.frames_per_glance = 20;
  c.glances_per_region = 1;
  c.seed = 31;
  const Dataset d = generate(c);
  const auto& frames = d.subjects[0].frames;

  const NormalizationContext ctx = compute_context(frames);

  // Translate and uniformly scale every raw frame, recompute everything.
  const double s = 2.75, tx = 123.4, ty = -57.9;
  std::vector<LandmarkFrame> moved = frames;
  for (auto& f : moved) {
    for (auto& p : f.landmarks) {
      p.x = s * p.x + tx;
      p.y = s * p.y + ty;
    }
  }
  const NormalizationContext moved_ctx = compute_context(moved);

  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Shape a = normalize_frame(frames[i], ctx);
    const Shape b = normalize_frame(moved[i], moved_ctx);
    for (int j = 0; j < kNumLandmarks; ++j) {
      CHECK(std::fabs(a[j].x - b[j].x) <= 1e-12);
      CHECK(std::fabs(a[j].y - b[j].y) <= 1e-12);
    }
  }
}

TEST_CASE("pure translation leaves normalized output unchanged within 1e-12") {
  GenConfig c;
  c.n_subjects = 1;
  c.frames_per_glance = 10;
  c.glances_per_region = 1;
  c.seed = 77;
  const Dataset d = generate(c);
  const auto& frames = d.subjects[0].frames;
  const NormalizationContext ctx = compute_context(frames);

  std::vector<LandmarkFrame> moved = frames;
  for (auto& f : moved) {
    for (auto& p : f.landmarks) {
      p.x += 50.0;
      p.y += -30.0;
    }
  }
  const NormalizationContext moved_ctx = compute_context(moved);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Shape a = normalize_frame(frames[i], ctx);
    const Shape b = normalize_frame(moved[i], moved_ctx);
    for (int j = 0; j < kNumLandmarks; ++j) {
      CHECK(std::fabs(a[j].x - b[j].x) <= 1e-12);
      CHECK(std::fabs(a[j].y - b[j].y) <= 1e-12);
    }
  }
}
