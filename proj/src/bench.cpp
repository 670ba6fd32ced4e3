#include "gaze/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>

#include "gaze/decide.hpp"
#include "gaze/error.hpp"
#include "gaze/features.hpp"
#include "gaze/geometry.hpp"
#include "gaze/normalize.hpp"

namespace gaze {

namespace {

inline void do_not_optimize(const void* p) {
  asm volatile("" : : "g"(p) : "memory");
}

struct StageSamples {
  std::vector<double> ms;
};

StageTiming finalize(const std::string& name, std::vector<double> ms,
                     std::size_t warmup) {
  StageTiming t;
  t.stage = name;
  if (ms.size() > warmup) ms.erase(ms.begin(), ms.begin() + warmup);
  t.samples = ms.size();
  if (ms.empty()) return t;
  double sum = 0.0, mx = ms[0];
  for (const double v : ms) {
    sum += v;
    mx = std::max(mx, v);
  }
  t.mean_ms = sum / static_cast<double>(ms.size());
  t.max_ms = mx;
  std::sort(ms.begin(), ms.end());
  const std::size_t p95 =
      std::min(ms.size() - 1,
               static_cast<std::size_t>(0.95 * static_cast<double>(ms.size())));
  t.p95_ms = ms[p95];
  return t;
}

}  // namespace

std::vector<StageTiming> bench_pipeline(const Model& model,
                                        const Dataset& frames,
                                        int iterations) {
  if (iterations < 1) throw Error("bench: iterations must be >= 1");

  // Flatten frames and resolve a context per subject: the model registry
  // where available, otherwise computed from the input stream.
  std::vector<const LandmarkFrame*> flat;
  std::vector<const NormalizationContext*> frame_ctx;
  std::vector<NormalizationContext> local_ctx;
  local_ctx.reserve(frames.subjects.size());
  for (const auto& subject : frames.subjects) {
    const NormalizationContext* ctx = model.find_context(subject.subject_id);
    if (ctx == nullptr) {
      local_ctx.push_back(
          compute_context(subject.frames, model.context_window));
      ctx = &local_ctx.back();
    }
    for (const auto& f : subject.frames) {
      flat.push_back(&f);
      frame_ctx.push_back(ctx);
    }
  }
  if (flat.empty()) throw Error("bench: no frames");

  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0)
        .count();
  };

  StageSamples normalize_s, angles_s, extract_s, predict_s, decide_s;
  std::vector<double> features(model.plan.feature_len());
  std::array<double, 3> angle_buf;

  for (int it = 0; it < iterations; ++it) {
    const LandmarkFrame& frame = *flat[it % flat.size()];
    const NormalizationContext& ctx = *frame_ctx[it % flat.size()];

    auto t0 = clock::now();
    const Shape normalized = normalize_frame(frame, ctx);
    normalize_s.ms.push_back(ms_since(t0));
    do_not_optimize(&normalized);

    t0 = clock::now();
    for (const Triangle& tri : model.plan.triangulation.triangles) {
      if (!try_triangle_angles(normalized[model.plan.selected[tri.a]],
                               normalized[model.plan.selected[tri.b]],
                               normalized[model.plan.selected[tri.c]],
                               angle_buf)) {
        angle_buf = {std::numbers::pi, 0.0, 0.0};
      }
      do_not_optimize(&angle_buf);
    }
    angles_s.ms.push_back(ms_since(t0));

    t0 = clock::now();
    extract(normalized, model.plan, features.data());
    extract_s.ms.push_back(ms_since(t0));
    do_not_optimize(features.data());

    t0 = clock::now();
    const ProbVector probs = model.forest.predict_proba(features);
    predict_s.ms.push_back(ms_since(t0));
    do_not_optimize(probs.data());

    t0 = clock::now();
    const auto decision = prune(probs, 1.0);
    decide_s.ms.push_back(ms_since(t0));
    do_not_optimize(&decision);
  }

  const std::size_t warmup = static_cast<std::size_t>(iterations) / 10;
  return {
      finalize("normalize", std::move(normalize_s.ms), warmup),
      finalize("triangulate_angles", std::move(angles_s.ms), warmup),
      finalize("extract", std::move(extract_s.ms), warmup),
      finalize("predict", std::move(predict_s.ms), warmup),
      finalize("decide", std::move(decide_s.ms), warmup),
  };
}

}  // namespace gaze
